use crate::geometry::{Mat3, Vec3};
use crate::simworld::Anchor;
use crate::Scalar;

/// `AᵀA` for the linearized batch range model, stored as its six distinct
/// entries:
///
/// ```text
///        | m1 m2 m3 |
/// AᵀA =  | m2 m4 m5 |  = Σᵢ eᵢ eᵢᵀ,   eᵢ = (x̂ − pᵢ) / ‖x̂ − pᵢ‖
///        | m3 m5 m6 |
/// ```
///
/// With unit-variance range noise, `(AᵀA)⁻¹` is the least-squares position
/// covariance, so `det(AᵀA)` is inversely proportional to the squared volume
/// of the covariance ellipsoid.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoMatrix<T> {
    pub m: [T; 6],
    /// Agent estimate the matrix was built at.
    pub agent: Vec3<T>,
    /// Ids of anchors that contributed a term.
    pub used: Vec<u32>,
    /// Ids of anchors skipped for being inside the standoff radius.
    pub skipped: Vec<u32>,
}

impl<T: Scalar> InfoMatrix<T> {
    /// Number of contributing anchors; equals the trace.
    pub fn anchor_count(&self) -> usize {
        self.used.len()
    }

    pub fn trace(&self) -> T {
        self.m[0] + self.m[3] + self.m[5]
    }

    pub fn to_mat3(&self) -> Mat3<T> {
        let [m1, m2, m3, m4, m5, m6] = self.m;
        Mat3::from_rows([[m1, m2, m3], [m2, m4, m5], [m3, m5, m6]])
    }

    pub fn has_skipped(&self) -> bool {
        !self.skipped.is_empty()
    }
}

/// Adds `u uᵀ / ‖u‖²` to an m-form accumulator.
#[inline]
pub(crate) fn accumulate<T: Scalar>(m: &mut [T; 6], u: &Vec3<T>) {
    let r2 = u.norm_squared();
    m[0] += u.x * u.x / r2;
    m[1] += u.x * u.y / r2;
    m[2] += u.x * u.z / r2;
    m[3] += u.y * u.y / r2;
    m[4] += u.y * u.z / r2;
    m[5] += u.z * u.z / r2;
}

/// Assembles `AᵀA` at the agent estimate. Anchors closer than `standoff` are
/// left out and reported in [`InfoMatrix::skipped`].
pub fn build_info_matrix<T: Scalar>(agent: &Vec3<T>, anchors: &[Anchor<T>], standoff: T) -> InfoMatrix<T> {
    let mut m = [T::zero(); 6];
    let mut used = Vec::with_capacity(anchors.len());
    let mut skipped = Vec::new();
    for a in anchors {
        let u = *agent - a.position;
        let dist = u.norm();
        if dist < standoff || dist == T::zero() {
            skipped.push(a.id);
            continue;
        }
        accumulate(&mut m, &u);
        used.push(a.id);
    }
    InfoMatrix { m, agent: *agent, used, skipped }
}

/// Closed-form determinant of an m-form matrix.
#[inline]
pub(crate) fn det_mform<T: Scalar>(m: &[T; 6]) -> T {
    let [m1, m2, m3, m4, m5, m6] = *m;
    m1 * (m4 * m6 - m5 * m5) - m2 * (m2 * m6 - m5 * m3) + m3 * (m2 * m5 - m4 * m3)
}

/// `det(AᵀA)`, the product of its eigenvalues. Bounded by `(N/3)³`.
pub fn det_info<T: Scalar>(info: &InfoMatrix<T>) -> T {
    det_mform(&info.m)
}

#[cfg(test)]
mod tests {
    use nalgebra::Matrix3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    type V = Vec3<f64>;

    fn random_point(rng: &mut ChaCha8Rng) -> V {
        V::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0), rng.random_range(0.0..10.0))
    }

    #[test]
    fn orthonormal_directions_give_identity() {
        let anchors = [
            Anchor::fixed(0, V::new(1.0, 0.0, 0.0)),
            Anchor::fixed(1, V::new(0.0, 1.0, 0.0)),
            Anchor::fixed(2, V::new(0.0, 0.0, 1.0)),
        ];
        let info = build_info_matrix(&V::zeros(), &anchors, 0.3);
        assert_eq!(info.to_mat3(), Mat3::identity());
        assert_eq!(info.trace(), 3.0);
        assert_eq!(det_info(&info), 1.0);
    }

    #[test]
    fn coplanar_network_is_rank_deficient() {
        let anchors = [
            Anchor::fixed(0, V::new(2.0, 1.0, 0.0)),
            Anchor::fixed(1, V::new(-1.0, 3.0, 0.0)),
            Anchor::fixed(2, V::new(-2.0, -2.0, 0.0)),
            Anchor::mobile(3, V::new(4.0, -1.0, 0.0)),
        ];
        let info = build_info_matrix(&V::new(0.5, 0.2, 0.0), &anchors, 0.3);
        assert_eq!((info.m[2], info.m[4], info.m[5]), (0.0, 0.0, 0.0));
        assert_eq!(det_info(&info), 0.0);
    }

    #[test]
    fn anchors_inside_standoff_are_skipped() {
        let anchors = [Anchor::fixed(0, V::new(0.1, 0.0, 0.0)), Anchor::fixed(1, V::new(2.0, 0.0, 0.0))];
        let info = build_info_matrix(&V::zeros(), &anchors, 0.3);
        assert_eq!(info.skipped, vec![0]);
        assert_eq!(info.used, vec![1]);
        assert!(info.has_skipped());
        assert_eq!(info.trace(), 1.0);
    }

    #[test]
    fn matches_direct_assembly_and_eigen_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let agent = random_point(&mut rng);
            let anchors: Vec<_> = (0..5).map(|i| Anchor::fixed(i, random_point(&mut rng))).collect();
            if anchors.iter().any(|a| (a.position - agent).norm() < 0.3) {
                continue;
            }
            let info = build_info_matrix(&agent, &anchors, 0.3);

            let mut direct = Matrix3::<f64>::zeros();
            for a in &anchors {
                let e = (agent - a.position).normalized().unwrap();
                let e = nalgebra::Vector3::new(e.x, e.y, e.z);
                direct += e * e.transpose();
            }
            let ours = info.to_mat3();
            for i in 0..3 {
                for j in 0..3 {
                    assert!((ours[(i, j)] - direct[(i, j)]).abs() < 1e-12);
                }
            }
            assert!((info.trace() - 5.0).abs() < 1e-9);

            let eig = direct.symmetric_eigen().eigenvalues;
            assert!(eig.iter().all(|&l| l >= -1e-9));
            let product: f64 = eig.iter().product();
            let det = det_info(&info);
            assert!((det - product).abs() <= 1e-10 * product.abs().max(1e-12), "det {det} product {product}");
            assert!(det <= (5.0f64 / 3.0).powi(3) + 1e-12);
        }
    }

    #[test]
    fn single_precision() {
        let anchors = [
            Anchor::fixed(0, Vec3::<f32>::new(1.0, 0.0, 0.0)),
            Anchor::fixed(1, Vec3::new(0.0, 1.0, 0.0)),
            Anchor::fixed(2, Vec3::new(0.0, 0.0, 1.0)),
        ];
        let info = build_info_matrix(&Vec3::zeros(), &anchors, 0.3);
        assert_eq!(det_info(&info), 1.0f32);
    }
}
