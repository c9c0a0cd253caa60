//! Scenario files.
//!
//! A scenario is a TOML document with `[scenario]`, `[target]`,
//! `[observer]`, `[sensing]` and `[estimation]` sections. Angles are given in
//! degrees (keys end in `_deg`); everything else is meters and seconds.
//!
//! ```toml
//! [scenario]
//! name = "example"
//! t_end = 1800.0
//! dt = 10.0
//! seed = 42
//!
//! [target]
//! model = "uniformly_accelerated"
//! x = 3535.5
//! y = 3535.5
//! course_deg = 270.0
//! speed = 4.0
//! accel_course_deg = 0.0
//! accel = 0.004
//!
//! [observer]
//! legs = [
//!   { course_deg = 0.0, speed = 8.0, duration = 900.0 },
//!   { course_deg = 90.0, speed = 8.0, duration = 900.0 },
//! ]
//!
//! [sensing]
//! sigma_deg = 0.5
//! ```

use std::path::Path;

use serde::Deserialize;
use tma_core::estimators::{EstimatorConfig, MethodSpec};
use tma_core::kinematics::{
    Leg, LegSequence, ObserverPath, RangeClass, Scenario, ScenarioWarning, TrajectoryModel,
    WorldPoint, WorldVector,
};
use tma_core::polybasis::BasisKind;

use crate::error::{CliError, CliResult};
use crate::methods::{default_methods, parse_method_list};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    scenario: ScenarioSection,
    target: ModelSection,
    observer: ObserverSection,
    #[serde(default)]
    sensing: SensingSection,
    #[serde(default)]
    estimation: EstimationSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSection {
    name: String,
    #[serde(default)]
    t_start: f64,
    t_end: f64,
    dt: f64,
    #[serde(default)]
    seed: u64,
    range_class: Option<RangeClass>,
    /// Moves the target along the initial line of sight to this range.
    initial_range: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
enum ModelSection {
    UniformLinear {
        x: f64,
        y: f64,
        course_deg: f64,
        speed: f64,
    },
    UniformlyAccelerated {
        x: f64,
        y: f64,
        course_deg: f64,
        speed: f64,
        accel_course_deg: f64,
        accel: f64,
    },
    Parabola {
        x: f64,
        y: f64,
        course_deg: f64,
        speed: f64,
        curvature: f64,
    },
    Circulation {
        center_x: f64,
        center_y: f64,
        radius: f64,
        rate_deg_s: f64,
        #[serde(default)]
        phase_deg: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObserverSection {
    #[serde(default)]
    x: f64,
    #[serde(default)]
    y: f64,
    legs: Option<Vec<LegSection>>,
    model: Option<ModelSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LegSection {
    course_deg: f64,
    speed: f64,
    duration: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensingSection {
    #[serde(default = "default_sigma_deg")]
    sigma_deg: f64,
}

impl Default for SensingSection {
    fn default() -> Self {
        Self {
            sigma_deg: default_sigma_deg(),
        }
    }
}

fn default_sigma_deg() -> f64 {
    0.5
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimationSection {
    basis: Option<String>,
    degree: Option<usize>,
    refine: Option<bool>,
    refine_max_iters: Option<usize>,
    refine_tol: Option<f64>,
    cond_limit: Option<f64>,
    /// Default `--method` list for compare and sweep.
    methods: Option<Vec<String>>,
}

/// A parsed scenario file.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub estimation: EstimatorConfig,
    pub methods: Vec<MethodSpec>,
    pub warnings: Vec<ScenarioWarning>,
}

fn finite(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!(
            "{field}: must be finite, got {v}"
        )))
    }
}

fn model(section: &ModelSection, prefix: &str) -> CliResult<TrajectoryModel> {
    let f = |name: &str, v: f64| finite(&format!("{prefix}.{name}"), v);
    let m = match *section {
        ModelSection::UniformLinear {
            x,
            y,
            course_deg,
            speed,
        } => TrajectoryModel::UniformLinear {
            p0: WorldPoint::new(f("x", x)?, f("y", y)?),
            v: WorldVector::from_course(
                f("course_deg", course_deg)?.to_radians(),
                f("speed", speed)?,
            ),
        },
        ModelSection::UniformlyAccelerated {
            x,
            y,
            course_deg,
            speed,
            accel_course_deg,
            accel,
        } => TrajectoryModel::UniformlyAccelerated {
            p0: WorldPoint::new(f("x", x)?, f("y", y)?),
            v0: WorldVector::from_course(
                f("course_deg", course_deg)?.to_radians(),
                f("speed", speed)?,
            ),
            a: WorldVector::from_course(
                f("accel_course_deg", accel_course_deg)?.to_radians(),
                f("accel", accel)?,
            ),
        },
        ModelSection::Parabola {
            x,
            y,
            course_deg,
            speed,
            curvature,
        } => TrajectoryModel::parabola(
            WorldPoint::new(f("x", x)?, f("y", y)?),
            WorldVector::from_course(f("course_deg", course_deg)?.to_radians(), 1.0),
            f("speed", speed)?,
            f("curvature", curvature)?,
        )
        .map_err(|e| CliError::Config(format!("{prefix}: {e}")))?,
        ModelSection::Circulation {
            center_x,
            center_y,
            radius,
            rate_deg_s,
            phase_deg,
        } => TrajectoryModel::circulation(
            WorldPoint::new(f("center_x", center_x)?, f("center_y", center_y)?),
            f("radius", radius)?,
            f("rate_deg_s", rate_deg_s)?.to_radians(),
            f("phase_deg", phase_deg)?.to_radians(),
        )
        .map_err(|e| CliError::Config(format!("{prefix}: {e}")))?,
    };
    m.validate()
        .map_err(|e| CliError::Config(format!("{prefix}: {e}")))?;
    Ok(m)
}

/// Range class whose nominal range is closest on a log scale.
pub fn nearest_class(range: f64) -> RangeClass {
    [RangeClass::Small, RangeClass::Average, RangeClass::Big]
        .into_iter()
        .min_by(|a, b| {
            let da = (range.ln() - a.nominal_range().ln()).abs();
            let db = (range.ln() - b.nominal_range().ln()).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(RangeClass::Average)
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> CliResult<ScenarioConfig> {
    let file: File = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let sc = &file.scenario;

    let target = model(&file.target, "target")?;
    let obs = &file.observer;
    let start = WorldPoint::new(finite("observer.x", obs.x)?, finite("observer.y", obs.y)?);
    let observer = match (&obs.legs, &obs.model) {
        (Some(legs), None) => {
            let legs = legs
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let p = format!("observer.legs[{i}]");
                    Ok(Leg {
                        duration: finite(&format!("{p}.duration"), l.duration)?,
                        velocity: WorldVector::from_course(
                            finite(&format!("{p}.course_deg"), l.course_deg)?.to_radians(),
                            finite(&format!("{p}.speed"), l.speed)?,
                        ),
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            let seq = LegSequence::new(finite("scenario.t_start", sc.t_start)?, start, legs)
                .map_err(|e| CliError::Config(format!("observer.legs: {e}")))?;
            ObserverPath::Legs(seq)
        }
        (None, Some(m)) => {
            if obs.x != 0.0 || obs.y != 0.0 {
                return Err(CliError::Config(
                    "observer: x and y apply to legs only; give the model its own position".into(),
                ));
            }
            ObserverPath::Model(model(m, "observer.model")?)
        }
        _ => {
            return Err(CliError::Config(
                "observer: exactly one of 'legs' or 'model' is required".into(),
            ))
        }
    };

    let mut scenario = Scenario {
        name: sc.name.clone(),
        target,
        observer,
        t_start: sc.t_start,
        t_end: sc.t_end,
        dt: sc.dt,
        bearing_sigma: finite("sensing.sigma_deg", file.sensing.sigma_deg)?.to_radians(),
        seed: sc.seed,
        range_class: RangeClass::Average,
    };
    if let Some(r) = sc.initial_range {
        scenario = scenario.with_initial_range(r).map_err(CliError::config)?;
    }
    let initial_range = scenario
        .observer
        .position(scenario.t_start)
        .map(|o| o.distance(&scenario.target.position(scenario.t_start)))
        .map_err(CliError::config)?;
    scenario.range_class = sc
        .range_class
        .unwrap_or_else(|| nearest_class(initial_range));

    let est = &file.estimation;
    let mut estimation = EstimatorConfig::default();
    if let Some(b) = &est.basis {
        estimation.basis = b
            .parse::<BasisKind>()
            .map_err(|e| CliError::Config(format!("estimation.basis: {e}")))?;
    }
    if let Some(d) = est.degree {
        estimation.degree = d;
    }
    if let Some(r) = est.refine {
        estimation.refine = r;
    }
    if let Some(n) = est.refine_max_iters {
        estimation.refine_max_iters = n;
    }
    if let Some(t) = est.refine_tol {
        estimation.refine_tol = t;
    }
    if let Some(c) = est.cond_limit {
        estimation.cond_limit = c;
    }
    estimation
        .validate()
        .map_err(|e| CliError::Config(format!("estimation: {e}")))?;

    let methods = match &est.methods {
        Some(list) => parse_method_list(list, &estimation).map_err(|e| match e {
            CliError::Usage(m) => CliError::Config(format!("estimation.methods: {m}")),
            other => other,
        })?,
        None => default_methods(&estimation),
    };
    let max_degree = methods
        .iter()
        .map(MethodSpec::effective_degree)
        .max()
        .unwrap_or(1);
    let warnings = scenario.validate(max_degree).map_err(CliError::config)?;

    Ok(ScenarioConfig {
        scenario,
        estimation,
        methods,
        warnings,
    })
}

/// Reads a scenario file, returning the parsed config and the raw bytes
/// (for the manifest digest).
pub fn load_scenario(path: &Path) -> CliResult<(ScenarioConfig, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::Config(format!("{}: not valid UTF-8", path.display())))?;
    let cfg = parse_scenario(text).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok((cfg, bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[scenario]
name = "t"
t_end = 100.0
dt = 10.0
seed = 7

[target]
model = "uniform_linear"
x = 1000.0
y = 2000.0
course_deg = 90.0
speed = 5.0

[observer]
legs = [
  { course_deg = 0.0, speed = 10.0, duration = 50.0 },
  { course_deg = 90.0, speed = 10.0, duration = 50.0 },
]
"#;

    #[test]
    fn parses_base() {
        let cfg = parse_scenario(BASE).unwrap();
        let s = &cfg.scenario;
        assert_eq!(s.observation_count(), 11);
        assert_eq!(s.seed, 7);
        assert!((s.bearing_sigma - 0.5f64.to_radians()).abs() < 1e-15);
        let v = s.target.velocity(0.0);
        assert!((v.vx - 5.0).abs() < 1e-12 && v.vy.abs() < 1e-12);
        assert_eq!(s.range_class, RangeClass::Small);
        assert_eq!(cfg.methods.len(), 2);
        assert!(cfg.warnings.is_empty());
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (BASE.replace("dt = 10.0", "dt = 0.0"), "dt"),
            (BASE.replace("dt = 10.0", "dt = -1.0"), "dt"),
            (BASE.replace("seed = 7", "seed = 7\nwobble = 1"), "wobble"),
            (BASE.replace("speed = 5.0", ""), "speed"),
            (BASE.replace("uniform_linear", "spiral"), "spiral"),
            (format!("{BASE}\n[sensing]\nsigma_deg = -1.0\n"), "sigma"),
            (
                format!("{BASE}\n[estimation]\nbasis = \"hermite\"\n"),
                "basis",
            ),
        ];
        for (text, needle) in cases {
            match parse_scenario(&text) {
                Err(CliError::Config(m)) => assert!(m.contains(needle), "{needle}: {m}"),
                other => panic!("{needle}: {other:?}"),
            }
        }
    }

    #[test]
    fn initial_range_rescales() {
        let text = BASE.replace("seed = 7", "seed = 7\ninitial_range = 30000.0");
        let cfg = parse_scenario(&text).unwrap();
        let p = cfg.scenario.target.position(0.0);
        assert!((p.x.hypot(p.y) - 30000.0).abs() < 1e-6);
        assert_eq!(cfg.scenario.range_class, RangeClass::Big);
    }
}
