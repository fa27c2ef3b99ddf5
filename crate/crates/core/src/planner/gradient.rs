//! Closed-form gradient of `det(AᵀA)` with respect to one mobile anchor.
//!
//! Derivation. Write the information matrix in m-form (see [`InfoMatrix`]).
//! Expanding the determinant along the first row,
//!
//! ```text
//! det = m1(m4 m6 − m5²) − m2(m2 m6 − m5 m3) + m3(m2 m5 − m4 m3)
//! ```
//!
//! so its partials in the six entries are the cofactors (off-diagonal entries
//! appear twice in a symmetric matrix, hence the factor 2):
//!
//! ```text
//! ∂det/∂m1 = m4 m6 − m5²        ∂det/∂m4 = m1 m6 − m3²       ∂det/∂m6 = m1 m4 − m2²
//! ∂det/∂m2 = 2(m3 m5 − m2 m6)   ∂det/∂m3 = 2(m2 m5 − m3 m4)  ∂det/∂m5 = 2(m2 m3 − m1 m5)
//! ```
//!
//! Only the mobile anchor's term depends on its position `p = (x, y, z)`.
//! With `u = x̂ − p` and `r² = ‖u‖²` that term contributes
//! `f_ab = u_a u_b / r²` to entry `(a, b)`. Since `∂u/∂p = −I`,
//!
//! ```text
//! ∂f_ab/∂p_c = −(δ_ac u_b + δ_bc u_a) / r² + 2 u_a u_b u_c / r⁴
//! ```
//!
//! and the gradient is `∂det/∂p_c = Σ_k ∂det/∂m_k · ∂m_k/∂p_c`, three rational
//! expressions in the anchor and agent positions.
//!
//! [`InfoMatrix`]: super::InfoMatrix

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::planner::info::{accumulate, det_mform};
use crate::simworld::Anchor;
use crate::Scalar;

/// `∂det/∂(m1, …, m6)`
pub(crate) fn det_partials<T: Scalar>(m: &[T; 6]) -> [T; 6] {
    let [m1, m2, m3, m4, m5, m6] = *m;
    let two = T::lit(2.0);
    [
        m4 * m6 - m5 * m5,
        two * (m3 * m5 - m2 * m6),
        two * (m2 * m5 - m3 * m4),
        m1 * m6 - m3 * m3,
        two * (m2 * m3 - m1 * m5),
        m1 * m4 - m2 * m2,
    ]
}

/// `∂(f11, f12, f13, f22, f23, f33)/∂p_c` for the term `u uᵀ / ‖u‖²`, `u = x̂ − p`.
fn term_partials<T: Scalar>(u: &Vec3<T>, c: usize) -> [T; 6] {
    let r2 = u.norm_squared();
    let r4 = r2 * r2;
    let two = T::lit(2.0);
    let uc = u[c];
    // entries in m-form order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    PAIRS.map(|(a, b)| {
        let mut linear = T::zero();
        if a == c {
            linear += u[b];
        }
        if b == c {
            linear += u[a];
        }
        -linear / r2 + two * u[a] * u[b] * uc / r4
    })
}

/// Analytic `∂det(AᵀA)/∂p` for the anchor `mobile_id`, all other anchors held fixed.
///
/// Anchors (other than the mobile one) inside `standoff` of the agent are
/// left out of the matrix, matching [`super::build_info_matrix`]. A mobile
/// anchor inside the standoff is a degenerate-geometry error.
pub fn grad_det<T: Scalar>(agent: &Vec3<T>, anchors: &[Anchor<T>], mobile_id: u32, standoff: T) -> Result<Vec3<T>> {
    let mobile = anchors
        .iter()
        .find(|a| a.id == mobile_id)
        .ok_or_else(|| Error::Config(format!("no anchor with id {mobile_id}")))?;
    let u = *agent - mobile.position;
    if !u.is_finite() {
        return Err(Error::NonFinite("planner geometry"));
    }
    let dist = u.norm();
    if dist < standoff || dist == T::zero() {
        return Err(Error::DegenerateGeometry(format!(
            "mobile anchor {mobile_id} is within the standoff radius of the agent"
        )));
    }

    let mut m = [T::zero(); 6];
    for a in anchors {
        let ua = *agent - a.position;
        let d = ua.norm();
        if a.id != mobile_id && (d < standoff || d == T::zero()) {
            continue;
        }
        accumulate(&mut m, &ua);
    }

    let dd = det_partials(&m);
    let component = |c: usize| -> T { dd.iter().zip(term_partials(&u, c)).map(|(&a, b)| a * b).sum() };
    Ok(Vec3::new(component(0), component(1), component(2)))
}

/// Determinant of the network with the mobile anchor moved to `position`.
/// Used by tests and the grid-search oracle; not part of the ascent path.
pub fn det_with_anchor_at<T: Scalar>(
    agent: &Vec3<T>,
    anchors: &[Anchor<T>],
    mobile_id: u32,
    position: Vec3<T>,
    standoff: T,
) -> T {
    let mut m = [T::zero(); 6];
    for a in anchors {
        let p = if a.id == mobile_id { position } else { a.position };
        let u = *agent - p;
        let d = u.norm();
        if d < standoff || d == T::zero() {
            continue;
        }
        accumulate(&mut m, &u);
    }
    det_mform(&m)
}
