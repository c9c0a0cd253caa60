//! Ground-truth motion of target and observer, and scenario assembly.
//!
//! Axes are x East and y North, in meters and seconds. Courses are measured
//! clockwise from North in radians.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WorldPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WorldVector {
    pub vx: f64,
    pub vy: f64,
}

impl WorldPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &WorldPoint) -> f64 {
        (*self - *other).norm()
    }
}

impl WorldVector {
    pub const fn new(vx: f64, vy: f64) -> Self {
        Self { vx, vy }
    }

    /// Vector of length `speed` along `course` (clockwise from North).
    pub fn from_course(course: f64, speed: f64) -> Self {
        let (s, c) = course.sin_cos();
        Self::new(speed * s, speed * c)
    }

    pub fn norm(&self) -> f64 {
        self.vx.hypot(self.vy)
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite()
    }
}

impl Add<WorldVector> for WorldPoint {
    type Output = WorldPoint;
    fn add(self, v: WorldVector) -> WorldPoint {
        WorldPoint::new(self.x + v.vx, self.y + v.vy)
    }
}

impl Sub for WorldPoint {
    type Output = WorldVector;
    fn sub(self, other: WorldPoint) -> WorldVector {
        WorldVector::new(self.x - other.x, self.y - other.y)
    }
}

impl Add for WorldVector {
    type Output = WorldVector;
    fn add(self, o: WorldVector) -> WorldVector {
        WorldVector::new(self.vx + o.vx, self.vy + o.vy)
    }
}

impl Sub for WorldVector {
    type Output = WorldVector;
    fn sub(self, o: WorldVector) -> WorldVector {
        WorldVector::new(self.vx - o.vx, self.vy - o.vy)
    }
}

impl Mul<f64> for WorldVector {
    type Output = WorldVector;
    fn mul(self, k: f64) -> WorldVector {
        WorldVector::new(self.vx * k, self.vy * k)
    }
}

/// Closed-form smooth motion, evaluated at absolute time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrajectoryModel {
    UniformLinear {
        p0: WorldPoint,
        v: WorldVector,
    },
    UniformlyAccelerated {
        p0: WorldPoint,
        v0: WorldVector,
        a: WorldVector,
    },
    /// `y' = curvature * x'^2` in a frame whose x' axis is `along`, with
    /// `x' = speed_along * t`.
    Parabola {
        p0: WorldPoint,
        along: WorldVector,
        speed_along: f64,
        curvature: f64,
    },
    /// Constant-rate turn. `phase0` and the position angle follow the course
    /// convention, so `phase0 = 0` puts the target due North of `center`.
    Circulation {
        center: WorldPoint,
        radius: f64,
        angular_rate: f64,
        phase0: f64,
    },
}

impl TrajectoryModel {
    pub fn parabola(
        p0: WorldPoint,
        along: WorldVector,
        speed_along: f64,
        curvature: f64,
    ) -> Result<Self> {
        if (along.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "along",
                format!("must be a unit vector, |along| = {}", along.norm()),
            ));
        }
        Ok(TrajectoryModel::Parabola {
            p0,
            along,
            speed_along,
            curvature,
        })
    }

    pub fn circulation(
        center: WorldPoint,
        radius: f64,
        angular_rate: f64,
        phase0: f64,
    ) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(
                "radius",
                format!("must be positive, got {radius}"),
            ));
        }
        Ok(TrajectoryModel::Circulation {
            center,
            radius,
            angular_rate,
            phase0,
        })
    }

    /// Checks the structural invariants of the model's parameters.
    pub fn validate(&self) -> Result<()> {
        let finite = |ok: bool, field: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(field, "must be finite"))
            }
        };
        match self {
            TrajectoryModel::UniformLinear { p0, v } => {
                finite(p0.is_finite(), "position")?;
                finite(v.is_finite(), "velocity")
            }
            TrajectoryModel::UniformlyAccelerated { p0, v0, a } => {
                finite(p0.is_finite(), "position")?;
                finite(v0.is_finite(), "velocity")?;
                finite(a.is_finite(), "acceleration")
            }
            TrajectoryModel::Parabola {
                p0,
                along,
                speed_along,
                curvature,
            } => {
                finite(p0.is_finite(), "position")?;
                finite(speed_along.is_finite(), "speed_along")?;
                finite(curvature.is_finite(), "curvature")?;
                Self::parabola(*p0, *along, *speed_along, *curvature).map(|_| ())
            }
            TrajectoryModel::Circulation {
                center,
                radius,
                angular_rate,
                phase0,
            } => {
                finite(center.is_finite(), "center")?;
                finite(angular_rate.is_finite(), "angular_rate")?;
                finite(phase0.is_finite(), "phase0")?;
                Self::circulation(*center, *radius, *angular_rate, *phase0).map(|_| ())
            }
        }
    }

    pub fn position(&self, t: f64) -> WorldPoint {
        match *self {
            TrajectoryModel::UniformLinear { p0, v } => p0 + v * t,
            TrajectoryModel::UniformlyAccelerated { p0, v0, a } => p0 + v0 * t + a * (0.5 * t * t),
            TrajectoryModel::Parabola {
                p0,
                along,
                speed_along,
                curvature,
            } => {
                let s = speed_along * t;
                p0 + along * s + normal_of(along) * (curvature * s * s)
            }
            TrajectoryModel::Circulation {
                center,
                radius,
                angular_rate,
                phase0,
            } => {
                let (s, c) = (phase0 + angular_rate * t).sin_cos();
                WorldPoint::new(center.x + radius * s, center.y + radius * c)
            }
        }
    }

    pub fn velocity(&self, t: f64) -> WorldVector {
        match *self {
            TrajectoryModel::UniformLinear { v, .. } => v,
            TrajectoryModel::UniformlyAccelerated { v0, a, .. } => v0 + a * t,
            TrajectoryModel::Parabola {
                along,
                speed_along,
                curvature,
                ..
            } => {
                let s = speed_along * t;
                (along + normal_of(along) * (2.0 * curvature * s)) * speed_along
            }
            TrajectoryModel::Circulation {
                radius,
                angular_rate,
                phase0,
                ..
            } => {
                let (s, c) = (phase0 + angular_rate * t).sin_cos();
                WorldVector::new(radius * angular_rate * c, -radius * angular_rate * s)
            }
        }
    }

    /// The same motion shifted rigidly by `delta`.
    pub fn translated(&self, delta: WorldVector) -> TrajectoryModel {
        let mut out = self.clone();
        match &mut out {
            TrajectoryModel::UniformLinear { p0, .. }
            | TrajectoryModel::UniformlyAccelerated { p0, .. }
            | TrajectoryModel::Parabola { p0, .. } => *p0 = *p0 + delta,
            TrajectoryModel::Circulation { center, .. } => *center = *center + delta,
        }
        out
    }

    fn is_uniform_linear(&self) -> bool {
        match self {
            TrajectoryModel::UniformLinear { .. } => true,
            TrajectoryModel::UniformlyAccelerated { a, .. } => a.vx == 0.0 && a.vy == 0.0,
            TrajectoryModel::Parabola { curvature, .. } => *curvature == 0.0,
            TrajectoryModel::Circulation { angular_rate, .. } => *angular_rate == 0.0,
        }
    }
}

/// Left-hand normal of a unit vector: North for an East-pointing `along`.
fn normal_of(along: WorldVector) -> WorldVector {
    WorldVector::new(-along.vy, along.vx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub duration: f64,
    pub velocity: WorldVector,
}

/// Piecewise uniform-linear motion. Each leg starts where the previous one
/// ended, so position is continuous at every join.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegSequence {
    t_start: f64,
    start: WorldPoint,
    legs: Vec<Leg>,
}

impl LegSequence {
    pub fn new(t_start: f64, start: WorldPoint, legs: Vec<Leg>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::invalid("legs", "at least one leg is required"));
        }
        if !t_start.is_finite() || !start.is_finite() {
            return Err(Error::invalid(
                "legs",
                "start time and position must be finite",
            ));
        }
        for (i, leg) in legs.iter().enumerate() {
            if !(leg.duration > 0.0) || !leg.duration.is_finite() {
                return Err(Error::invalid(
                    "legs",
                    format!("leg {i} duration must be positive, got {}", leg.duration),
                ));
            }
            if !leg.velocity.is_finite() {
                return Err(Error::invalid(
                    "legs",
                    format!("leg {i} velocity must be finite"),
                ));
            }
        }
        Ok(Self {
            t_start,
            start,
            legs,
        })
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn span(&self) -> (f64, f64) {
        (
            self.t_start,
            self.t_start + self.legs.iter().map(|l| l.duration).sum::<f64>(),
        )
    }

    /// Absolute times at which one leg hands over to the next.
    pub fn join_times(&self) -> Vec<f64> {
        let mut t = self.t_start;
        let mut out = Vec::with_capacity(self.legs.len().saturating_sub(1));
        for leg in &self.legs[..self.legs.len() - 1] {
            t += leg.duration;
            out.push(t);
        }
        out
    }

    fn locate(&self, t: f64) -> Result<(WorldPoint, usize, f64)> {
        let (lo, hi) = self.span();
        // Tolerate rounding in the accumulated end time.
        let slack = 1e-9 * (1.0 + hi.abs());
        if !(t >= lo && t <= hi + slack) {
            return Err(Error::Domain { t, t0: lo, tf: hi });
        }
        let mut origin = self.start;
        let mut leg_start = self.t_start;
        let last = self.legs.len() - 1;
        for (i, leg) in self.legs.iter().enumerate() {
            let leg_end = leg_start + leg.duration;
            if t <= leg_end || i == last {
                return Ok((origin, i, t - leg_start));
            }
            origin = origin + leg.velocity * leg.duration;
            leg_start = leg_end;
        }
        unreachable!("legs is non-empty")
    }

    pub fn position(&self, t: f64) -> Result<WorldPoint> {
        let (origin, i, dt) = self.locate(t)?;
        Ok(origin + self.legs[i].velocity * dt)
    }

    pub fn velocity(&self, t: f64) -> Result<WorldVector> {
        let (_, i, _) = self.locate(t)?;
        Ok(self.legs[i].velocity)
    }

    /// Largest distance between where a leg ends, evaluated at the absolute
    /// join time, and where the next leg starts.
    pub fn max_join_gap(&self) -> f64 {
        let mut origin = self.start;
        let mut leg_start = self.t_start;
        let mut gap: f64 = 0.0;
        for pair in self.legs.windows(2) {
            let join = leg_start + pair[0].duration;
            let left = origin + pair[0].velocity * (join - leg_start);
            let next_origin = origin + pair[0].velocity * pair[0].duration;
            gap = gap.max(left.distance(&next_origin));
            origin = next_origin;
            leg_start = join;
        }
        gap
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ObserverPath {
    Model(TrajectoryModel),
    Legs(LegSequence),
}

impl ObserverPath {
    pub fn position(&self, t: f64) -> Result<WorldPoint> {
        match self {
            ObserverPath::Model(m) => Ok(m.position(t)),
            ObserverPath::Legs(l) => l.position(t),
        }
    }

    pub fn velocity(&self, t: f64) -> Result<WorldVector> {
        match self {
            ObserverPath::Model(m) => Ok(m.velocity(t)),
            ObserverPath::Legs(l) => l.velocity(t),
        }
    }

    /// True when the observer never changes velocity.
    pub fn is_single_uniform_leg(&self) -> bool {
        match self {
            ObserverPath::Model(m) => m.is_uniform_linear(),
            ObserverPath::Legs(l) => l.legs.windows(2).all(|w| w[0].velocity == w[1].velocity),
        }
    }
}

/// Initial observer-to-target range class of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeClass {
    Small,
    Average,
    Big,
}

impl RangeClass {
    /// Nominal initial range in meters.
    pub fn nominal_range(self) -> f64 {
        match self {
            RangeClass::Small => 5_000.0,
            RangeClass::Average => 15_000.0,
            RangeClass::Big => 30_000.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RangeClass::Small => "small",
            RangeClass::Average => "average",
            RangeClass::Big => "big",
        }
    }
}

impl fmt::Display for RangeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RangeClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(RangeClass::Small),
            "average" => Ok(RangeClass::Average),
            "big" => Ok(RangeClass::Big),
            other => Err(Error::invalid(
                "initial_range_class",
                format!("unknown class '{other}' (expected small, average or big)"),
            )),
        }
    }
}

/// Non-fatal findings from [`Scenario::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioWarning {
    /// The observer does not maneuver, so a uniform-linear target is
    /// unobservable from bearings alone.
    NonManeuveringObserver,
}

impl fmt::Display for ScenarioWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioWarning::NonManeuveringObserver => f.write_str(
                "observer follows a single uniform leg; bearings-only geometry may be unobservable",
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub target: TrajectoryModel,
    pub observer: ObserverPath,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Bearing noise standard deviation, radians.
    pub bearing_sigma: f64,
    pub seed: u64,
    pub range_class: RangeClass,
}

impl Scenario {
    /// Checks every scenario invariant for estimators of degree up to
    /// `max_degree`, returning warnings for suspicious but legal setups.
    pub fn validate(&self, max_degree: usize) -> Result<Vec<ScenarioWarning>> {
        if !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(Error::invalid("t_start/t_end", "must be finite"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid(
                "dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        if !(self.t_end > self.t_start) {
            return Err(Error::invalid(
                "t_end",
                format!("must exceed t_start ({} <= {})", self.t_end, self.t_start),
            ));
        }
        if !(self.bearing_sigma >= 0.0) || !self.bearing_sigma.is_finite() {
            return Err(Error::invalid(
                "sigma",
                format!(
                    "must be a finite non-negative angle, got {}",
                    self.bearing_sigma
                ),
            ));
        }
        self.target.validate()?;
        match &self.observer {
            ObserverPath::Model(m) => m.validate()?,
            ObserverPath::Legs(legs) => {
                let (lo, hi) = legs.span();
                let last = self.sample_times().last().copied().unwrap_or(self.t_start);
                if self.t_start < lo || last > hi + 1e-9 * (1.0 + hi.abs()) {
                    return Err(Error::invalid(
                        "legs",
                        format!(
                            "observer legs cover [{lo}, {hi}] but samples span [{}, {last}]",
                            self.t_start
                        ),
                    ));
                }
                if legs.max_join_gap() > 1e-9 {
                    return Err(Error::invalid(
                        "legs",
                        "observer position jumps at a leg join",
                    ));
                }
            }
        }
        let n = self.observation_count();
        let needed = 2 * (max_degree + 1);
        if n < needed {
            return Err(Error::invalid(
                "dt",
                format!(
                    "yields {n} observations, at least {needed} needed for degree {max_degree}"
                ),
            ));
        }
        let mut warnings = Vec::new();
        if self.observer.is_single_uniform_leg() {
            warnings.push(ScenarioWarning::NonManeuveringObserver);
        }
        Ok(warnings)
    }

    /// `floor((t_end - t_start) / dt) + 1`, forgiving rounding right at the
    /// last grid point.
    pub fn observation_count(&self) -> usize {
        let ratio = (self.t_end - self.t_start) / self.dt;
        if !ratio.is_finite() || ratio < 0.0 {
            return 0;
        }
        (ratio + 1e-9).floor() as usize + 1
    }

    pub fn sample_times(&self) -> Vec<f64> {
        (0..self.observation_count())
            .map(|i| self.t_start + i as f64 * self.dt)
            .collect()
    }

    /// The scenario with the target shifted along the initial line of sight
    /// so that the initial observer-to-target range equals `range`.
    pub fn with_initial_range(&self, range: f64) -> Result<Scenario> {
        if !(range > 0.0) || !range.is_finite() {
            return Err(Error::invalid(
                "initial_range",
                format!("must be positive, got {range}"),
            ));
        }
        let obs = self.observer.position(self.t_start)?;
        let tgt = self.target.position(self.t_start);
        let los = tgt - obs;
        let current = los.norm();
        if current <= 1e-9 {
            return Err(Error::DegenerateGeometry { t: self.t_start });
        }
        let delta = los * (range / current - 1.0);
        let mut out = self.clone();
        out.target = self.target.translated(delta);
        Ok(out)
    }

    /// Same span, with `dt` chosen so that exactly `n` observations are taken.
    pub fn with_observation_count(&self, n: usize) -> Result<Scenario> {
        if n < 2 {
            return Err(Error::invalid("n_obs", format!("need at least 2, got {n}")));
        }
        let mut out = self.clone();
        out.dt = (self.t_end - self.t_start) / (n - 1) as f64;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn all_models() -> Vec<TrajectoryModel> {
        vec![
            TrajectoryModel::UniformLinear {
                p0: WorldPoint::new(100.0, -50.0),
                v: WorldVector::new(3.0, -4.0),
            },
            TrajectoryModel::UniformlyAccelerated {
                p0: WorldPoint::new(0.0, 1000.0),
                v0: WorldVector::new(2.0, 1.0),
                a: WorldVector::new(0.05, -0.02),
            },
            TrajectoryModel::parabola(
                WorldPoint::new(-500.0, 200.0),
                WorldVector::from_course(0.7, 1.0),
                5.0,
                0.001,
            )
            .unwrap(),
            TrajectoryModel::circulation(WorldPoint::new(10.0, 20.0), 100.0, 0.01, 0.3).unwrap(),
        ]
    }

    #[test]
    fn position_examples() {
        let acc = TrajectoryModel::UniformlyAccelerated {
            p0: WorldPoint::new(0.0, 0.0),
            v0: WorldVector::new(2.0, 0.0),
            a: WorldVector::new(1.0, 0.0),
        };
        assert_eq!(acc.position(2.0), WorldPoint::new(6.0, 0.0));
        assert_eq!(acc.velocity(2.0), WorldVector::new(4.0, 0.0));

        let circ =
            TrajectoryModel::circulation(WorldPoint::new(0.0, 0.0), 100.0, 0.01, 0.0).unwrap();
        assert_eq!(circ.position(0.0), WorldPoint::new(0.0, 100.0));

        let par = TrajectoryModel::parabola(
            WorldPoint::new(0.0, 0.0),
            WorldVector::new(1.0, 0.0),
            5.0,
            0.001,
        )
        .unwrap();
        let p = par.position(10.0);
        assert_relative_eq!(p.x, 50.0, epsilon = 1e-12);
        assert_relative_eq!(p.y, 2.5, epsilon = 1e-12);

        let lin = TrajectoryModel::UniformLinear {
            p0: WorldPoint::new(7.0, 7.0),
            v: WorldVector::new(3.0, -4.0),
        };
        for t in [0.0, 1.5, 1000.0] {
            assert_eq!(lin.velocity(t), WorldVector::new(3.0, -4.0));
        }
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let h = 1e-4;
        for model in all_models() {
            for i in 0..20 {
                let t = -300.0 + 37.3 * i as f64;
                let v = model.velocity(t);
                let p_hi = model.position(t + h);
                let p_lo = model.position(t - h);
                let fd =
                    WorldVector::new((p_hi.x - p_lo.x) / (2.0 * h), (p_hi.y - p_lo.y) / (2.0 * h));
                let err = (v - fd).norm();
                assert!(err <= 1e-6 * (1.0 + v.norm()), "{model:?} t={t}: {err}");
            }
        }
    }

    #[test]
    fn circulation_stays_on_circle() {
        let m = TrajectoryModel::circulation(WorldPoint::new(-3000.0, 4000.0), 750.0, -0.013, 1.1)
            .unwrap();
        for i in 0..200 {
            let t = i as f64 * 17.0;
            let r = m.position(t).distance(&WorldPoint::new(-3000.0, 4000.0));
            assert_relative_eq!(r, 750.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_acceleration_equals_uniform_linear() {
        let p0 = WorldPoint::new(12.0, -9.0);
        let v = WorldVector::new(4.5, 2.25);
        let acc = TrajectoryModel::UniformlyAccelerated {
            p0,
            v0: v,
            a: WorldVector::new(0.0, 0.0),
        };
        let lin = TrajectoryModel::UniformLinear { p0, v };
        for i in 0..50 {
            let t = i as f64 * 13.7;
            assert!(acc.position(t).distance(&lin.position(t)) <= 1e-12);
        }
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(TrajectoryModel::circulation(WorldPoint::default(), 0.0, 0.1, 0.0).is_err());
        assert!(TrajectoryModel::parabola(
            WorldPoint::default(),
            WorldVector::new(1.0, 1.0),
            1.0,
            0.1
        )
        .is_err());
    }

    fn dogleg() -> LegSequence {
        LegSequence::new(
            0.0,
            WorldPoint::new(0.0, 0.0),
            vec![
                Leg {
                    duration: 30.0,
                    velocity: WorldVector::from_course(0.0, 5.0),
                },
                Leg {
                    duration: 30.0,
                    velocity: WorldVector::from_course(PI / 2.0, 5.0),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn legs_are_continuous_and_bounded() {
        let legs = dogleg();
        assert!(legs.max_join_gap() <= 1e-9);
        let join = legs.join_times()[0];
        let before = legs.position(join - 1e-9).unwrap();
        let after = legs.position(join + 1e-9).unwrap();
        assert!(before.distance(&after) < 1e-7);
        let end = legs.position(60.0).unwrap();
        assert_relative_eq!(end.x, 150.0, epsilon = 1e-9);
        assert_relative_eq!(end.y, 150.0, epsilon = 1e-9);
        assert!(matches!(legs.position(60.5), Err(Error::Domain { .. })));
        assert!(matches!(legs.position(-1.0), Err(Error::Domain { .. })));
    }

    fn scenario(t_end: f64, dt: f64) -> Scenario {
        Scenario {
            name: "test".into(),
            target: all_models()[1].clone(),
            observer: ObserverPath::Legs(dogleg()),
            t_start: 0.0,
            t_end,
            dt,
            bearing_sigma: 0.0,
            seed: 1,
            range_class: RangeClass::Small,
        }
    }

    #[test]
    fn sample_time_examples() {
        assert_eq!(scenario(10.0, 5.0).sample_times(), vec![0.0, 5.0, 10.0]);
        assert_eq!(scenario(9.9, 5.0).sample_times(), vec![0.0, 5.0]);
        assert_eq!(scenario(60.0, 1.0).sample_times().len(), 61);
        assert_eq!(scenario(60.0, 0.1).sample_times().len(), 601);
    }

    #[test]
    fn validation() {
        assert!(scenario(60.0, 1.0).validate(2).unwrap().is_empty());
        let err = scenario(60.0, 0.0).validate(2).unwrap_err();
        assert!(err.to_string().contains("dt"));
        assert!(scenario(60.0, 20.0).validate(2).is_err());
        assert!(
            scenario(90.0, 1.0).validate(2).is_err(),
            "legs do not cover the run"
        );

        let mut s = scenario(60.0, 1.0);
        s.observer = ObserverPath::Model(TrajectoryModel::UniformLinear {
            p0: WorldPoint::default(),
            v: WorldVector::new(1.0, 0.0),
        });
        assert_eq!(
            s.validate(1).unwrap(),
            vec![ScenarioWarning::NonManeuveringObserver]
        );
    }

    #[test]
    fn initial_range_rescaling() {
        let s = scenario(60.0, 1.0).with_initial_range(15_000.0).unwrap();
        let r = s
            .target
            .position(0.0)
            .distance(&s.observer.position(0.0).unwrap());
        assert_relative_eq!(r, 15_000.0, max_relative = 1e-12);
        let s = scenario(60.0, 1.0).with_observation_count(13).unwrap();
        assert_eq!(s.sample_times().len(), 13);
    }
}
