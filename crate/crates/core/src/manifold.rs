//! The 6-sphere in quaternionic coordinates `(p, w)` with `Re(p) = 0` and
//! `|p|^2 + |w|^2 = 1`, the SO(4) action and its invariant, the S^5 slice,
//! tangent frames for finite differences, and seeded uniform sampling.

use nalgebra::SVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{conj_by, PureImaginary, Quaternion};

pub type Vec7 = SVector<f64, 7>;

/// Tolerance for the `|p|^2 + |w|^2 = 1` constraint and for slice membership.
pub const SPHERE_TOL: f64 = 1e-9;

/// Point of S^6 as a pair `(p, w)` in Im H x H.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointS6 {
    pub p: PureImaginary,
    pub w: Quaternion,
}

impl PointS6 {
    pub fn new(p: PureImaginary, w: Quaternion) -> Result<Self> {
        let n2 = p.norm_sq() + w.norm_sq();
        if (n2 - 1.0).abs() >= SPHERE_TOL {
            return Err(Error::NotOnSphere { norm_sq: n2 });
        }
        Ok(PointS6 { p, w })
    }

    /// Construct without the constraint check; callers must guarantee it.
    pub(crate) fn new_unchecked(p: PureImaginary, w: Quaternion) -> Self {
        PointS6 { p, w }
    }

    pub fn norm_sq(&self) -> f64 {
        self.p.norm_sq() + self.w.norm_sq()
    }

    /// Euclidean distance in the ambient R^7.
    pub fn dist(&self, other: &PointS6) -> f64 {
        (embed7(self) - embed7(other)).norm()
    }
}

/// Element of SO(4) as a pair of unit quaternions modulo simultaneous sign
/// flip. The stored representative has the first nonzero coordinate of `q`
/// positive, so serialization of the class is stable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct So4Element {
    q: Quaternion,
    r: Quaternion,
}

impl So4Element {
    pub fn new(q: Quaternion, r: Quaternion) -> Result<Self> {
        if !q.is_unit() {
            return Err(Error::NotUnit { what: "q", norm: q.norm() });
        }
        if !r.is_unit() {
            return Err(Error::NotUnit { what: "r", norm: r.norm() });
        }
        let flip = q
            .to_array()
            .iter()
            .find(|v| **v != 0.0)
            .map(|v| *v < 0.0)
            .unwrap_or(false);
        if flip {
            Ok(So4Element { q: -q, r: -r })
        } else {
            Ok(So4Element { q, r })
        }
    }

    pub const fn identity() -> Self {
        So4Element { q: Quaternion::ONE, r: Quaternion::ONE }
    }

    pub fn q(&self) -> Quaternion {
        self.q
    }

    pub fn r(&self) -> Quaternion {
        self.r
    }

    /// Componentwise group product.
    pub fn compose(&self, other: &So4Element) -> Result<Self> {
        So4Element::new(self.q * other.q, self.r * other.r)
    }
}

/// The action `(q,r) . (p,w) = (q p q̄, r w q̄)`.
pub fn so4_act(g: &So4Element, x: &PointS6) -> PointS6 {
    let p = conj_by(g.q, x.p.as_quat()).im();
    let w = g.r * x.w * g.q.conj();
    PointS6::new_unchecked(p, w)
}

/// The cohomogeneity-one invariant `S(p,w) = |p|^2 - |w|^2`.
pub fn invariant_s(x: &PointS6) -> f64 {
    x.p.norm_sq() - x.w.norm_sq()
}

/// The antipodal involution `(p,w) -> (-p,-w)`.
pub fn antipodal(x: &PointS6) -> PointS6 {
    PointS6::new_unchecked(-x.p, -x.w)
}

/// Ambient coordinates `(p1,p2,p3, w0,w1,w2,w3)`: p in (i,j,k) order, then w
/// in (1,i,j,k) order. This makes the 3+1+3 block structure of the diagonal
/// SO(7) embedding literal.
pub fn embed7(x: &PointS6) -> Vec7 {
    Vec7::from([x.p.b, x.p.c, x.p.d, x.w.a, x.w.b, x.w.c, x.w.d])
}

pub fn lift7(v: &Vec7) -> Result<PointS6> {
    let n = v.norm();
    if (n - 1.0).abs() >= SPHERE_TOL {
        return Err(Error::NotUnitVector { norm: n });
    }
    Ok(PointS6::new_unchecked(
        PureImaginary::new(v[0], v[1], v[2]),
        Quaternion::new(v[3], v[4], v[5], v[6]),
    ))
}

fn lift7_unchecked(v: &Vec7) -> PointS6 {
    PointS6::new_unchecked(
        PureImaginary::new(v[0], v[1], v[2]),
        Quaternion::new(v[3], v[4], v[5], v[6]),
    )
}

/// Renormalize an ambient vector back onto the sphere.
pub fn retract(v: &Vec7) -> Result<PointS6> {
    let n = v.norm();
    if n == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(lift7_unchecked(&(v / n)))
}

/// Deterministic orthonormal tangent frame at `x`, orientation-aligned so
/// that `det[f_1 .. f_6, n] = +1` in the standard orientation of R^7.
///
/// Built by the Householder reflection carrying e_1 to the outward normal;
/// the remaining reflected basis vectors span the tangent space. The
/// reflection flips orientation, which we repair by negating the last frame
/// vector.
pub fn tangent_frame(x: &PointS6) -> [Vec7; 6] {
    let n = embed7(x);
    let mut e1 = Vec7::zeros();
    e1[0] = 1.0;
    let v = n - e1;
    let v2 = v.norm_squared();
    let mut frame = [Vec7::zeros(); 6];
    if v2 < 1e-24 {
        // n = e1: the frame (e2..e7, e1) is already positively oriented.
        for (k, f) in frame.iter_mut().enumerate() {
            f[k + 1] = 1.0;
        }
        return frame;
    }
    for (k, f) in frame.iter_mut().enumerate() {
        let mut ek = Vec7::zeros();
        ek[k + 1] = 1.0;
        *f = ek - v * (2.0 * v[k + 1] / v2);
    }
    frame[5] = -frame[5];
    frame
}

/// `n` points uniform on S^6: normalized 7-dimensional Gaussians,
/// deterministic for a given seed.
pub fn sample_s6(seed: u64, n: usize) -> Vec<PointS6> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    (0..n)
        .map(|_| {
            let mut v = Vec7::zeros();
            loop {
                for c in v.iter_mut() {
                    *c = normal.sample(&mut rng);
                }
                let norm = v.norm();
                if norm > 1e-6 {
                    v /= norm;
                    break;
                }
            }
            lift7_unchecked(&v)
        })
        .collect()
}

/// Uniform unit quaternions, for sampling SO(4)/SO(3) group elements.
pub fn sample_unit_quaternions(seed: u64, n: usize) -> Vec<Quaternion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    (0..n)
        .map(|_| loop {
            let q = Quaternion::new(
                normal.sample(&mut rng),
                normal.sample(&mut rng),
                normal.sample(&mut rng),
                normal.sample(&mut rng),
            );
            let norm = q.norm();
            if norm > 1e-6 {
                break q * (1.0 / norm);
            }
        })
        .collect()
}

/// Accept a point of the S^5 slice `Re(w) = 0`; reject anything off-slice.
pub fn restrict_s5(x: &PointS6) -> Result<PointS6> {
    if x.w.a.abs() >= SPHERE_TOL {
        return Err(Error::OffSlice { re_w: x.w.a });
    }
    Ok(*x)
}

/// Project onto the S^5 slice: drop `Re(w)` and renormalize. Used by the
/// verify suites to manufacture on-slice sample points.
pub fn project_s5(x: &PointS6) -> Result<PointS6> {
    let w = Quaternion::new(0.0, x.w.b, x.w.c, x.w.d);
    let v = embed7(&PointS6::new_unchecked(x.p, w));
    retract(&v)
}
