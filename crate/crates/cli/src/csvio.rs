//! CSV encoding of observations, truth and tracks.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! `parse(print(x)) == x` for every finite value. One header row, comma
//! separated, LF line endings.

use tma_core::estimators::TrajectoryEstimate;
use tma_core::kinematics::WorldPoint;
use tma_core::sensing::{BearingObservation, ObservationSeries, TruthTrack};

use crate::error::{CliError, CliResult};

pub const OBSERVATION_HEADER: [&str; 5] = ["t", "obs_x", "obs_y", "bearing_rad", "sigma_rad"];
pub const TRUTH_HEADER: [&str; 5] = ["t", "tgt_x", "tgt_y", "tgt_vx", "tgt_vy"];
pub const TRACK_HEADER: [&str; 6] = ["t", "x", "y", "vx", "vy", "pos_stderr"];

/// Builds CSV text row by row.
pub struct CsvText {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvText {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // Writing to a Vec cannot fail.
        writer
            .write_record(header.iter().map(|h| h.as_ref()))
            .expect("in-memory write");
        Self { writer }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        self.writer
            .write_record(fields.iter().map(|f| f.as_ref()))
            .expect("in-memory write");
    }

    pub fn numbers(&mut self, values: &[f64]) {
        let fields: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        self.row(&fields);
    }

    pub fn finish(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn observations_csv(series: &ObservationSeries) -> Vec<u8> {
    let mut out = CsvText::new(&OBSERVATION_HEADER);
    for o in series.observations() {
        out.numbers(&[o.t, o.observer.x, o.observer.y, o.beta, o.sigma]);
    }
    out.finish()
}

pub fn truth_csv(truth: &TruthTrack) -> Vec<u8> {
    let mut out = CsvText::new(&TRUTH_HEADER);
    for s in &truth.samples {
        out.numbers(&[
            s.t,
            s.position.x,
            s.position.y,
            s.velocity.vx,
            s.velocity.vy,
        ]);
    }
    out.finish()
}

/// Predicted track at `times`. `pos_stderr` is the root sum of the x and y
/// standard errors.
pub fn track_csv(estimate: &TrajectoryEstimate, times: &[f64]) -> CliResult<Vec<u8>> {
    let mut out = CsvText::new(&TRACK_HEADER);
    for &t in times {
        let (p, v) = estimate.predict(t).map_err(CliError::data)?;
        let (sx, sy) = estimate.position_stderr(t).map_err(CliError::data)?;
        out.numbers(&[t, p.x, p.y, v.vx, v.vy, sx.hypot(sy)]);
    }
    Ok(out.finish())
}

/// Parses a numeric table whose header must equal `header`. Every field
/// must be a finite number.
pub fn read_table(text: &[u8], header: &[&str]) -> CliResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text);
    let got = reader
        .headers()
        .map_err(|e| CliError::Data(format!("header: {e}")))?;
    if got.iter().ne(header.iter().copied()) {
        return Err(CliError::Data(format!(
            "header must be '{}', got '{}'",
            header.join(","),
            got.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::Data(format!("line {line}: {e}")))?;
        if rec.len() != header.len() {
            return Err(CliError::Data(format!(
                "line {line}: expected {} fields, got {}",
                header.len(),
                rec.len()
            )));
        }
        let row = rec
            .iter()
            .zip(header)
            .map(|(field, name)| {
                let v: f64 = field.parse().map_err(|_| {
                    CliError::Data(format!("line {line}: {name} is not a number: '{field}'"))
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(CliError::Data(format!(
                        "line {line}: {name} must be finite, got '{field}'"
                    )))
                }
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Parses an observations file as written by `simulate`.
pub fn read_observations(text: &[u8]) -> CliResult<ObservationSeries> {
    let rows = read_table(text, &OBSERVATION_HEADER)?;
    if rows.is_empty() {
        return Err(CliError::Data("no observations".into()));
    }
    let obs = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            BearingObservation::new(r[0], WorldPoint::new(r[1], r[2]), r[3], r[4])
                .map_err(|e| CliError::Data(format!("line {}: {e}", i + 2)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    ObservationSeries::new(obs).map_err(CliError::data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_exact() {
        let values = [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            1e300,
            f64::MIN_POSITIVE,
            123456.78901234568,
            -0.0,
        ];
        let mut out = CsvText::new(&["v"]);
        for v in values {
            out.numbers(&[v]);
        }
        let text = out.finish();
        assert!(!text.contains(&b'\r'));
        let rows = read_table(&text, &["v"]).unwrap();
        for (row, v) in rows.iter().zip(values) {
            assert_eq!(row[0].to_bits(), v.to_bits());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bad: [&[u8]; 6] = [
            b"t,obs_x,obs_y,bearing_rad\n0,0,0,0\n",
            b"t,obs_x,obs_y,bearing_rad,sigma_rad\n0,0,0,NaN,0\n",
            b"t,obs_x,obs_y,bearing_rad,sigma_rad\n0,0,0,inf,0\n",
            b"t,obs_x,obs_y,bearing_rad,sigma_rad\n0,0,0,x,0\n",
            b"t,obs_x,obs_y,bearing_rad,sigma_rad\n0,0,0,0\n",
            b"t,obs_x,obs_y,bearing_rad,sigma_rad\n1,0,0,0,0\n0,0,0,0,0\n",
        ];
        for text in bad {
            assert!(matches!(read_observations(text), Err(CliError::Data(_))));
        }
        assert!(read_observations(b"t,obs_x,obs_y,bearing_rad,sigma_rad\n").is_err());
    }

    #[test]
    fn observations_round_trip() {
        let text = b"t,obs_x,obs_y,bearing_rad,sigma_rad\n0,1.5,-2,0.25,0.01\n10,3,4,3.141592653589793,0.01\n";
        let series = read_observations(text).unwrap();
        assert_eq!(observations_csv(&series), text.to_vec());
    }
}
