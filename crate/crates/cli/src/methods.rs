//! `--method` specifications such as `name=npoly,basis=cheb1,degree=2,refine=true`.

use tma_core::estimators::{EstimatorConfig, MethodKind, MethodSpec};
use tma_core::polybasis::BasisKind;

use crate::error::{CliError, CliResult};

/// Label used when a spec does not name itself, e.g. `npoly-legendre-d2`
/// or `nbearings-refined`.
pub fn default_label(kind: MethodKind, config: &EstimatorConfig) -> String {
    let mut label = match kind {
        MethodKind::NBearings => "nbearings".to_string(),
        MethodKind::NPolynomials => format!("npoly-{}-d{}", config.basis, config.degree),
    };
    if config.refine {
        label.push_str("-refined");
    }
    label
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!(
            "method key '{key}' expects true or false, got '{v}'"
        ))),
    }
}

/// Parses one method spec. Keys not given fall back to `defaults`.
pub fn parse_method_spec(spec: &str, defaults: &EstimatorConfig) -> CliResult<MethodSpec> {
    let mut kind = None;
    let mut label = None;
    let mut config = *defaults;
    let mut touched_poly = false;
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("method entry '{part}' is not key=value")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" | "method" => {
                kind = Some(
                    value
                        .parse::<MethodKind>()
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                )
            }
            "basis" => {
                config.basis = value
                    .parse::<BasisKind>()
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                touched_poly = true;
            }
            "degree" => {
                config.degree = value.parse::<usize>().map_err(|_| {
                    CliError::Usage(format!(
                        "method degree must be a non-negative integer, got '{value}'"
                    ))
                })?;
                touched_poly = true;
            }
            "refine" => config.refine = parse_bool(key, value)?,
            "label" => {
                if value.is_empty()
                    || value.contains(|c: char| c == '/' || c == '\\' || c.is_whitespace())
                {
                    return Err(CliError::Usage(format!(
                        "method label '{value}' must be non-empty without spaces or slashes"
                    )));
                }
                label = Some(value.to_string());
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown method key '{other}' (expected name, basis, degree, refine, label)"
                )))
            }
        }
    }
    let kind =
        kind.ok_or_else(|| CliError::Usage(format!("method '{spec}' lacks name=nbearings|npoly")))?;
    if kind == MethodKind::NBearings {
        if touched_poly {
            return Err(CliError::Usage("nbearings takes no basis or degree".into()));
        }
        let base = MethodSpec::n_bearings();
        config.basis = base.config.basis;
        config.degree = base.config.degree;
    }
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(MethodSpec {
        label: label.unwrap_or_else(|| default_label(kind, &config)),
        kind,
        config,
    })
}

/// Parses every spec and rejects duplicate labels, since labels name
/// output files.
pub fn parse_method_list(
    specs: &[String],
    defaults: &EstimatorConfig,
) -> CliResult<Vec<MethodSpec>> {
    let methods = specs
        .iter()
        .map(|s| parse_method_spec(s, defaults))
        .collect::<CliResult<Vec<_>>>()?;
    for (i, m) in methods.iter().enumerate() {
        if methods[..i].iter().any(|o| o.label == m.label) {
            return Err(CliError::Usage(format!(
                "duplicate method label '{}'",
                m.label
            )));
        }
    }
    Ok(methods)
}

/// N-Bearings plus N-Polynomials at the given settings.
pub fn default_methods(defaults: &EstimatorConfig) -> Vec<MethodSpec> {
    let npoly = MethodSpec {
        label: default_label(MethodKind::NPolynomials, defaults),
        kind: MethodKind::NPolynomials,
        config: *defaults,
    };
    vec![MethodSpec::n_bearings(), npoly]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_spec() {
        let m = parse_method_spec(
            "name=npoly,basis=cheb1,degree=3,refine=true",
            &EstimatorConfig::default(),
        )
        .unwrap();
        assert_eq!(m.kind, MethodKind::NPolynomials);
        assert_eq!(m.config.basis, BasisKind::Chebyshev1);
        assert_eq!(m.config.degree, 3);
        assert!(m.config.refine);
        assert_eq!(m.label, "npoly-cheb1-d3-refined");
    }

    #[test]
    fn defaults_fill_in() {
        let d = EstimatorConfig {
            degree: 4,
            ..Default::default()
        };
        let m = parse_method_spec("name=npoly", &d).unwrap();
        assert_eq!(m.config.degree, 4);
        let nb = parse_method_spec("name=nbearings, label=nb", &d).unwrap();
        assert_eq!(nb.label, "nb");
        assert_eq!(nb.config.degree, 1);
    }

    #[test]
    fn rejects_bad_specs() {
        let d = EstimatorConfig::default();
        for bad in [
            "basis=cheb1",
            "name=kalman",
            "name=npoly,degree=-1",
            "name=npoly,degree=13",
            "name=npoly,color=red",
            "name=npoly,refine=maybe",
            "name=nbearings,degree=2",
            "name=npoly,label=a/b",
            "npoly",
        ] {
            assert!(parse_method_spec(bad, &d).is_err(), "{bad}");
        }
        let dup = vec!["name=npoly".to_string(), "name=npoly".to_string()];
        assert!(parse_method_list(&dup, &d).is_err());
    }
}
