use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::simworld::{gravity, Anchor, RigidBodyTruth};
use crate::Scalar;

/// Agent-anchor separations below this are treated as degenerate [m].
pub const MIN_RANGE: f64 = 1e-6;

/// Standard deviations of the zero-mean white sensor noise terms.
///
/// Defaults are simulation choices for a small indoor quadcopter, not
/// datasheet values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSpec {
    /// Accelerometer noise per sample [m/s²].
    pub accel_std: f64,
    /// Gyroscope noise per sample [rad/s].
    pub gyro_std: f64,
    /// Range noise per measurement [m].
    pub range_std: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { accel_std: 0.5, gyro_std: 0.01, range_std: 0.05 }
    }
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self { accel_std: 0.0, gyro_std: 0.0, range_std: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("accel_std", self.accel_std), ("gyro_std", self.gyro_std), ("range_std", self.range_std)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("noise.{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Range measurement variance.
    pub fn range_variance(&self) -> f64 {
        self.range_std * self.range_std
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImuSample<T> {
    pub timestamp: T,
    /// Specific force in the body frame [m/s²].
    pub accel: Vec3<T>,
    /// Angular rate in the body frame [rad/s].
    pub gyro: Vec3<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeSample<T> {
    pub timestamp: T,
    pub anchor_id: u32,
    pub range: T,
}

fn gaussian3<T: Scalar, R: Rng + ?Sized>(rng: &mut R, std: T) -> Vec3<T>
where
    StandardNormal: Distribution<T>,
{
    let mut draw = || -> T { StandardNormal.sample(rng) };
    let v = Vec3::new(draw(), draw(), draw());
    v * std
}

/// Accelerometer and gyroscope readings for the current truth state.
///
/// Always consumes six normal draws so that streams stay aligned across runs
/// with different noise magnitudes.
pub fn synth_imu<T: Scalar, R: Rng + ?Sized>(
    state: &RigidBodyTruth<T>,
    timestamp: T,
    noise: &NoiseSpec,
    rng: &mut R,
) -> ImuSample<T>
where
    StandardNormal: Distribution<T>,
{
    let specific_force = state.attitude.transpose().apply(&(state.accel - gravity()));
    let accel_noise = gaussian3(rng, T::lit(noise.accel_std));
    let gyro_noise = gaussian3(rng, T::lit(noise.gyro_std));
    ImuSample { timestamp, accel: specific_force + accel_noise, gyro: state.angular_velocity + gyro_noise }
}

/// Noisy distance from the agent to an anchor, clamped at zero.
pub fn synth_range<T: Scalar, R: Rng + ?Sized>(
    position: &Vec3<T>,
    anchor: &Anchor<T>,
    timestamp: T,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<RangeSample<T>>
where
    StandardNormal: Distribution<T>,
{
    let z: T = StandardNormal.sample(rng);
    let distance = (*position - anchor.position).norm();
    if !distance.is_finite() {
        return Err(Error::NonFinite("range geometry"));
    }
    if distance < T::lit(MIN_RANGE) {
        return Err(Error::DegenerateGeometry(format!("agent coincides with anchor {}", anchor.id)));
    }
    let range = (distance + z * T::lit(noise.range_std)).max(T::zero());
    Ok(RangeSample { timestamp, anchor_id: anchor.id, range })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::geometry::so3_exp;

    type V = Vec3<f64>;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn hover_reads_gravity_reaction() {
        let s = RigidBodyTruth::at_rest(V::zeros());
        let imu = synth_imu(&s, 0.0, &NoiseSpec::noiseless(), &mut rng());
        assert_eq!(imu.accel, V::new(0.0, 0.0, 9.81));
        assert_eq!(imu.gyro, V::zeros());
    }

    #[test]
    fn gyro_reads_body_rate() {
        let mut s = RigidBodyTruth::at_rest(V::zeros());
        s.angular_velocity = V::new(0.1, 0.0, 0.0);
        let imu = synth_imu(&s, 0.0, &NoiseSpec { gyro_std: 0.0, ..NoiseSpec::default() }, &mut rng());
        assert_eq!(imu.gyro, V::new(0.1, 0.0, 0.0));
    }

    #[test]
    fn accelerometer_is_in_body_frame() {
        let mut s = RigidBodyTruth::at_rest(V::zeros());
        s.attitude = so3_exp(&V::new(std::f64::consts::FRAC_PI_2, 0.0, 0.0));
        let imu = synth_imu(&s, 0.0, &NoiseSpec::noiseless(), &mut rng());
        // rolled 90°: gravity reaction along body +y
        assert!((imu.accel - V::new(0.0, 9.81, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn accel_noise_statistics() {
        let n = 100_000;
        let sigma = 0.01;
        let noise = NoiseSpec { accel_std: sigma, gyro_std: 0.0, range_std: 0.0 };
        let s = RigidBodyTruth::at_rest(V::zeros());
        let mut r = rng();
        let samples: Vec<f64> = (0..n).map(|_| synth_imu(&s, 0.0, &noise, &mut r).accel.x).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std = (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt(), "mean {mean}");
        assert!((std - sigma).abs() < 0.05 * sigma, "std {std}");
    }

    #[test]
    fn three_four_five() {
        let a = Anchor::fixed(2, V::new(3.0, 4.0, 0.0));
        let r = synth_range(&V::zeros(), &a, 1.5, &NoiseSpec::noiseless(), &mut rng()).unwrap();
        assert_eq!(r, RangeSample { timestamp: 1.5, anchor_id: 2, range: 5.0 });
    }

    #[test]
    fn coincident_anchor_is_degenerate() {
        let a = Anchor::fixed(0, V::new(1.0, 1.0, 1.0));
        let x = a.position + V::new(1e-7, 0.0, 0.0);
        let err = synth_range(&x, &a, 0.0, &NoiseSpec::noiseless(), &mut rng()).unwrap_err();
        assert!(matches!(err, Error::DegenerateGeometry(_)));
    }

    #[test]
    fn range_noise_is_unbiased() {
        let n = 100_000;
        let noise = NoiseSpec { range_std: 0.05, ..NoiseSpec::noiseless() };
        let a = Anchor::fixed(0, V::new(2.0, 0.0, 0.0));
        let mut r = rng();
        let mean =
            (0..n).map(|_| synth_range(&V::zeros(), &a, 0.0, &noise, &mut r).unwrap().range).sum::<f64>() / n as f64;
        assert!((mean - 2.0).abs() < 3.0 * 0.05 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn range_is_clamped_at_zero() {
        let noise = NoiseSpec { range_std: 10.0, ..NoiseSpec::noiseless() };
        let a = Anchor::fixed(0, V::new(0.01, 0.0, 0.0));
        let mut r = rng();
        let ranges: Vec<f64> =
            (0..1000).map(|_| synth_range(&V::zeros(), &a, 0.0, &noise, &mut r).unwrap().range).collect();
        assert!(ranges.iter().all(|&v| v >= 0.0));
        assert!(ranges.contains(&0.0));
    }

    #[test]
    fn same_seed_same_stream() {
        let s = RigidBodyTruth::at_rest(V::zeros());
        let noise = NoiseSpec::default();
        let (mut a, mut b) = (rng(), rng());
        for _ in 0..100 {
            let (x, y) = (synth_imu(&s, 0.0, &noise, &mut a), synth_imu(&s, 0.0, &noise, &mut b));
            assert_eq!(x.accel.to_array().map(f64::to_bits), y.accel.to_array().map(f64::to_bits));
        }
    }
}
