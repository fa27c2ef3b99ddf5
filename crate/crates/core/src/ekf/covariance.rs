use crate::error::{Error, Result};
use crate::geometry::{Mat3, Mat9, Vec3};
use crate::Scalar;

/// Diagonal load allowed when checking positive semi-definiteness.
pub const PSD_JITTER: f64 = 1e-12;

/// Tolerated `|Σ_ij − Σ_ji|` before the covariance is considered corrupt.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Block indices into the error state `(x, v, δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Position = 0,
    Velocity = 1,
    Attitude = 2,
}

/// Covariance of the 9-dimensional error state, partitioned into 3×3 blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Covariance9<T> {
    m: Mat9<T>,
}

impl<T: Scalar> Covariance9<T> {
    pub fn from_diagonal(position_var: T, velocity_var: T, attitude_var: T) -> Self {
        let (p, v, a) = (position_var, velocity_var, attitude_var);
        Self { m: Mat9::from_diagonal([p, p, p, v, v, v, a, a, a]) }
    }

    /// Wraps a full matrix after symmetrizing it and checking it is PSD.
    pub fn from_matrix(mut m: Mat9<T>) -> Result<Self> {
        m.symmetrize();
        let cov = Self { m };
        cov.check()?;
        Ok(cov)
    }

    pub(crate) fn from_matrix_unchecked(m: Mat9<T>) -> Self {
        Self { m }
    }

    #[inline]
    pub fn matrix(&self) -> &Mat9<T> {
        &self.m
    }

    pub fn block(&self, row: Block, col: Block) -> Mat3<T> {
        self.m.block(row as usize, col as usize)
    }

    /// `Σ_xx`
    pub fn position(&self) -> Mat3<T> {
        self.block(Block::Position, Block::Position)
    }

    /// Standard deviations (square roots of the diagonal) of one block.
    pub fn std_devs(&self, block: Block) -> Vec3<T> {
        let b = self.block(block, block);
        Vec3::new(b[(0, 0)], b[(1, 1)], b[(2, 2)]).map(|v| v.max(T::zero()).sqrt())
    }

    /// Verifies symmetry, non-negative diagonal and factorability after jitter.
    pub fn check(&self) -> Result<()> {
        if !self.m.is_finite() {
            return Err(Error::NumericalFailure("covariance has non-finite entries".into()));
        }
        let asym = self.m.asymmetry();
        if asym > T::lit(SYMMETRY_TOL) {
            return Err(Error::NumericalFailure(format!("covariance asymmetric by {asym}")));
        }
        if self.m.diagonal().iter().any(|&d| d < T::zero()) {
            return Err(Error::NumericalFailure("covariance has a negative diagonal entry".into()));
        }
        if self.m.cholesky(T::lit(PSD_JITTER)).is_none() {
            return Err(Error::NumericalFailure("covariance is not positive semi-definite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_blocks() {
        let c = Covariance9::<f64>::from_diagonal(1.0, 0.1, 0.01);
        assert_eq!(c.position(), Mat3::identity());
        assert_eq!(c.std_devs(Block::Attitude), Vec3::new(0.1, 0.1, 0.1));
        assert_eq!(c.block(Block::Position, Block::Velocity), Mat3::zeros());
        c.check().unwrap();
    }

    #[test]
    fn rejects_indefinite() {
        let mut m = Mat9::<f64>::identity();
        m[(0, 1)] = 2.0;
        m[(1, 0)] = 2.0;
        assert!(matches!(Covariance9::from_matrix(m), Err(Error::NumericalFailure(_))));
    }

    #[test]
    fn rejects_nan() {
        let mut m = Mat9::<f64>::identity();
        m[(3, 3)] = f64::NAN;
        assert!(Covariance9::from_matrix(m).is_err());
    }
}
