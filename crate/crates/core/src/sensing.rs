//! Bearing geometry, angle arithmetic and noisy observation generation.
//!
//! Bearings use the navigation convention: clockwise from North, so the unit
//! vector toward the target is `(sin b, cos b)` in (East, North) axes. All
//! angles are radians in `(-pi, pi]`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Scenario, WorldPoint, WorldVector};

const TWO_PI: f64 = 2.0 * PI;

/// Minimum observer-to-target distance for a defined bearing, meters.
pub const MIN_RANGE: f64 = 1e-9;

/// Bearing from `observer` to `target`.
pub fn true_bearing(observer: WorldPoint, target: WorldPoint) -> Result<f64> {
    let d = target - observer;
    if !(d.norm() > MIN_RANGE) {
        return Err(Error::CoincidentPoints);
    }
    Ok(wrap_angle(d.vx.atan2(d.vy)))
}

/// Reduces `a` modulo `2 pi` into `(-pi, pi]`. Values already in range are
/// returned bit-for-bit.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TWO_PI);
    if r > PI {
        r - TWO_PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BearingObservation {
    pub t: f64,
    pub observer: WorldPoint,
    /// Measured bearing, radians in `(-pi, pi]`.
    pub beta: f64,
    /// Noise standard deviation, radians.
    pub sigma: f64,
}

impl BearingObservation {
    /// Validates the fields and wraps `beta` into `(-pi, pi]`.
    pub fn new(t: f64, observer: WorldPoint, beta: f64, sigma: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidSeries(format!("non-finite time {t}")));
        }
        if !observer.is_finite() {
            return Err(Error::InvalidSeries(format!(
                "non-finite observer position at t = {t}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidSeries(format!(
                "non-finite bearing at t = {t}"
            )));
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidSeries(format!(
                "invalid sigma {sigma} at t = {t}"
            )));
        }
        Ok(Self {
            t,
            observer,
            beta: wrap_angle(beta),
            sigma,
        })
    }
}

/// Bearings taken by the observer, strictly ordered in time. Carries no
/// information about the target beyond the measured angles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationSeries {
    observations: Vec<BearingObservation>,
}

impl ObservationSeries {
    pub fn new(observations: Vec<BearingObservation>) -> Result<Self> {
        let first = observations
            .first()
            .ok_or_else(|| Error::InvalidSeries("series is empty".into()))?;
        for w in observations.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidSeries(format!(
                    "times must be strictly increasing ({} then {})",
                    w[0].t, w[1].t
                )));
            }
        }
        let sigma = first.sigma;
        for o in &observations {
            let revalidated = BearingObservation::new(o.t, o.observer, o.beta, o.sigma)?;
            if revalidated.beta != o.beta {
                return Err(Error::InvalidSeries(format!(
                    "bearing at t = {} is not wrapped",
                    o.t
                )));
            }
            if (o.sigma - sigma).abs() > 1e-12 * sigma.max(1.0) {
                return Err(Error::InvalidSeries(format!(
                    "all observations must share one sigma ({} vs {} at t = {})",
                    sigma, o.sigma, o.t
                )));
            }
        }
        Ok(Self { observations })
    }

    pub fn observations(&self) -> &[BearingObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn sigma(&self) -> f64 {
        self.observations[0].sigma
    }

    pub fn times(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.t).collect()
    }

    pub fn time_span(&self) -> (f64, f64) {
        (self.observations[0].t, self.observations[self.len() - 1].t)
    }

    pub fn observer_positions(&self) -> Vec<WorldPoint> {
        self.observations.iter().map(|o| o.observer).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthSample {
    pub t: f64,
    pub position: WorldPoint,
    pub velocity: WorldVector,
}

/// Target ground truth at the observation times; used for scoring only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTrack {
    pub samples: Vec<TruthSample>,
}

impl TruthTrack {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }
}

/// Derives the seed of run `index` from a master seed.
///
/// `splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)`: a pure function
/// of the pair, so runs can be scheduled in any order on any number of
/// threads.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random stream for one run.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples the scenario: exact observer positions and Gaussian-corrupted
/// bearings at every grid time, plus the target truth at the same times.
///
/// One standard normal draw is consumed per observation regardless of
/// sigma, so the same stream yields the same normalized noise at any sigma.
pub fn observe<R: Rng + ?Sized>(
    scenario: &Scenario,
    rng: &mut R,
) -> Result<(ObservationSeries, TruthTrack)> {
    let times = scenario.sample_times();
    let mut observations = Vec::with_capacity(times.len());
    let mut samples = Vec::with_capacity(times.len());
    for &t in &times {
        let observer = scenario.observer.position(t)?;
        let target = scenario.target.position(t);
        let beta = true_bearing(observer, target).map_err(|_| Error::DegenerateGeometry { t })?;
        let z: f64 = rng.sample(StandardNormal);
        let noisy = wrap_angle(beta + scenario.bearing_sigma * z);
        observations.push(BearingObservation::new(
            t,
            observer,
            noisy,
            scenario.bearing_sigma,
        )?);
        samples.push(TruthSample {
            t,
            position: target,
            velocity: scenario.target.velocity(t),
        });
    }
    Ok((
        ObservationSeries::new(observations)?,
        TruthTrack { samples },
    ))
}
