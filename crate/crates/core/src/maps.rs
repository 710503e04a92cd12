//! The explicit maps: the Blakers-Massey element and its powers, the
//! normalized affine homotopy to a rational map, the rational maps Q and R,
//! the generic J-process engine, sigma and its powers, and the exotic
//! involutions.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::manifold::{antipodal, PointS6};
use crate::quat::{conj_by, quat_exp, Quaternion};

pub type Mat3 = SMatrix<f64, 3, 3>;
pub type Mat7 = SMatrix<f64, 7, 7>;

/// Below this value of |H_hat| the homotopy is declared degenerate. It never
/// fires for the affine homotopy; firing is itself a test failure.
pub const HOMOTOPY_DEGENERACY_FLOOR: f64 = 1e-9;

/// Profile of the n-th power of the Blakers-Massey element:
/// `sin(n pi t) / (t (1 - t^2))`, extended across the removable
/// singularities at t = 0 and t = 1.
///
/// Near t = 1 the numerator is rewritten through the exact identity
/// `sin(n pi t) = (-1)^(n+1) sin(n pi (1-t))` to avoid cancellation.
fn power_profile(n: i32, t: f64) -> f64 {
    let nf = f64::from(n);
    if t < 0.5 {
        let ratio = if t < 1e-8 { nf * PI } else { (nf * PI * t).sin() / t };
        ratio / (1.0 - t * t)
    } else {
        let u = 1.0 - t;
        let sign = if n.rem_euclid(2) == 0 { -1.0 } else { 1.0 };
        let ratio = if u < 1e-8 { nf * PI } else { (nf * PI * u).sin() / u };
        sign * ratio / (t * (1.0 + t))
    }
}

/// The even positive profile `g(t) = sin(pi t)/(t(1-t^2))` on [0, 1].
pub fn g_profile(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain { value: t });
    }
    Ok(power_profile(1, t))
}

/// The simplest even function with the sign of `cos(pi t)` on [0, 1]:
/// `c(t) = 1 - 4t^2`.
pub fn c_profile(t: f64) -> f64 {
    1.0 - 4.0 * t * t
}

/// The Blakers-Massey element `b: S^6 -> S^3`, evaluated through its
/// spelled-out analytic form
/// `b(p,w) = cos(pi|p|) + g(|p|) w p w̄`,
/// which needs no special case at w = 0 (there |p| = 1 and the value is -1).
pub fn bm(x: &PointS6) -> Quaternion {
    bm_pow(1, x)
}

/// Pointwise power `b^n(p,w) = cos(n pi |p|) + g_n(|p|) w p w̄`, with
/// `b^n(p,0) = (-1)^n`.
pub fn bm_pow(n: i32, x: &PointS6) -> Quaternion {
    let t = x.p.norm();
    let wpwbar = x.w * x.p.as_quat() * x.w.conj();
    Quaternion::scalar((f64::from(n) * PI * t).cos()) + wpwbar * power_profile(n, t)
}

/// The polynomial endpoint of the affine homotopy:
/// `r(p,w) = 1 - 4|p|^2 + w p w̄` (unnormalized).
fn rational_endpoint_raw(x: &PointS6) -> Quaternion {
    let wpwbar = x.w * x.p.as_quat() * x.w.conj();
    Quaternion::scalar(1.0 - 4.0 * x.p.norm_sq()) + wpwbar
}

/// The unnormalized affine homotopy `H_hat_s = (1-s) b + s r`.
pub fn homotopy_unnormalized(s: f64, x: &PointS6) -> Result<Quaternion> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfDomain { value: s });
    }
    Ok(bm(x) * (1.0 - s) + rational_endpoint_raw(x) * s)
}

/// The normalized homotopy `H_s = H_hat_s / |H_hat_s|` between the
/// Blakers-Massey element (s = 0) and the rational map Q (s = 1).
pub fn homotopy_h(s: f64, x: &PointS6) -> Result<Quaternion> {
    let h = homotopy_unnormalized(s, x)?;
    let norm = h.norm();
    if norm < HOMOTOPY_DEGENERACY_FLOOR {
        return Err(Error::DegenerateHomotopy { s, norm });
    }
    Ok(h * (1.0 / norm))
}

/// The rational map
/// `Q(p,w) = (1 + 4p^2 + w p w̄) / sqrt((1+4p^2)^2 - |w|^4 p^2)`,
/// written with `p^2 = -|p|^2` as real scalars.
pub fn rational_q(x: &PointS6) -> Quaternion {
    let a0 = 1.0 - 4.0 * x.p.norm_sq();
    let wpwbar = x.w * x.p.as_quat() * x.w.conj();
    let den = (a0 * a0 + x.w.norm_sq().powi(2) * x.p.norm_sq()).sqrt();
    (Quaternion::scalar(a0) + wpwbar) * (1.0 / den)
}

/// Apply a quaternion to a point through conjugation on both slots:
/// `q . (p, w) = (q p q̄, q w q̄) / |q|^2`.
///
/// Dividing by the squared norm makes this the exact conjugation action for
/// any nonzero q; without it, rounding drift in |q| would be amplified
/// exponentially by iterated J-processes.
pub fn conj_apply(q: Quaternion, x: &PointS6) -> PointS6 {
    let inv = 1.0 / q.norm_sq();
    PointS6::new_unchecked(
        (conj_by(q, x.p.as_quat()) * inv).im(),
        conj_by(q, x.w) * inv,
    )
}

/// The J-process self-map `J_alpha(x) = alpha(x) . x`.
pub fn j_process(alpha: &GroupMap, x: &PointS6) -> Result<PointS6> {
    let q = alpha.eval(x)?;
    if !q.is_unit() {
        return Err(Error::NotUnit { what: "alpha value", norm: q.norm() });
    }
    Ok(conj_apply(q, x))
}

/// `J_{alpha^{-1}}`, using that alpha is unit-valued so the pointwise inverse
/// is the conjugate.
pub fn j_process_inv(alpha: &GroupMap, x: &PointS6) -> Result<PointS6> {
    let q = alpha.eval(x)?;
    if !q.is_unit() {
        return Err(Error::NotUnit { what: "alpha value", norm: q.norm() });
    }
    Ok(conj_apply(q.conj(), x))
}

/// The exotic diffeomorphism powers `sigma^k(x) = b^k(x) . x`.
pub fn sigma_k(k: i32, x: &PointS6) -> PointS6 {
    conj_apply(bm_pow(k, x), x)
}

/// The rational diffeomorphism R evaluated through its displayed rational
/// formula (square root cleared):
/// `R(p,w) = (n p m / den, n w m / den)` with `n = 1+4p^2 + w p w̄`,
/// `m = 1+4p^2 - w p w̄`, `den = (1+4p^2)^2 - |w|^4 p^2`.
///
/// This is an independent code path from `j_process(Q, x)`; the two are
/// compared by the verify suites.
pub fn rational_r(x: &PointS6) -> PointS6 {
    let a0 = 1.0 - 4.0 * x.p.norm_sq();
    let wpwbar = x.w * x.p.as_quat() * x.w.conj();
    let n = Quaternion::scalar(a0) + wpwbar;
    let m = Quaternion::scalar(a0) - wpwbar;
    let den = a0 * a0 + x.w.norm_sq().powi(2) * x.p.norm_sq();
    let inv = 1.0 / den;
    PointS6::new_unchecked(
        (n * x.p.as_quat() * m * inv).im(),
        n * x.w * m * inv,
    )
}

/// The deformed exotic involution `-J_{H_s}`; s = 0 gives `-sigma`,
/// s = 1 gives `-R`.
pub fn exotic_involution(s: f64, x: &PointS6) -> Result<PointS6> {
    Ok(antipodal(&j_process(&GroupMap::H(s), x)?))
}

/// Residual of the conjugation antisymmetry `b(-p,-w) = conj(b(p,w))`.
pub fn conj_antisymmetry_check(x: &PointS6) -> f64 {
    bm(&antipodal(x)).dist(bm(x).conj())
}

/// SO(3) rotation matrix of the conjugation action of a unit quaternion on
/// the (i,j,k) coordinates; invariant under q -> -q.
pub fn rot3_from_quat(q: Quaternion) -> Result<Mat3> {
    if !q.is_unit() {
        return Err(Error::NotUnit { what: "rotation quaternion", norm: q.norm() });
    }
    let Quaternion { a, b, c, d } = q;
    Ok(Mat3::new(
        1.0 - 2.0 * (c * c + d * d),
        2.0 * (b * c - a * d),
        2.0 * (b * d + a * c),
        2.0 * (b * c + a * d),
        1.0 - 2.0 * (b * b + d * d),
        2.0 * (c * d - a * b),
        2.0 * (b * d - a * c),
        2.0 * (c * d + a * b),
        1.0 - 2.0 * (b * b + c * c),
    ))
}

/// Diagonal embedding of SO(3) into SO(7): `diag(T, 1, T)` in the ambient
/// (p, Re w, Im w) block order.
pub fn delta7(t: &Mat3) -> Result<Mat7> {
    let defect = (t.transpose() * t - Mat3::identity()).norm();
    if defect >= 1e-9 {
        return Err(Error::Parse(format!(
            "matrix is not orthogonal (defect {defect:.3e})"
        )));
    }
    let mut m = Mat7::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(t);
    m[(3, 3)] = 1.0;
    m.fixed_view_mut::<3, 3>(4, 4).copy_from(t);
    Ok(m)
}

/// `B(x)`: the 7x7 linear action realizing sigma, so that
/// `embed7(sigma(x)) = B(x) embed7(x)`.
pub fn big_b(x: &PointS6) -> Mat7 {
    // bm is unit-valued to rounding; the checks cannot fire here.
    delta7(&rot3_from_quat(bm(x)).expect("bm is unit-valued"))
        .expect("rotation matrices are orthogonal")
}

/// `B(x)^k`, the linear action of sigma^k.
pub fn big_b_pow(k: i32, x: &PointS6) -> Mat7 {
    delta7(&rot3_from_quat(bm_pow(k, x)).expect("bm powers are unit-valued"))
        .expect("rotation matrices are orthogonal")
}

/// Group-valued maps `S^6 -> S^3` known to the registry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupMap {
    /// The Blakers-Massey element b.
    Bm,
    /// Pointwise power b^n.
    BmPow(i32),
    /// The normalized homotopy H_s.
    H(f64),
    /// Pointwise power H_s^k of the homotopy.
    HPow { s: f64, k: i32 },
    /// The rational endpoint Q.
    Q,
    /// Pointwise power Q^k.
    QPow(i32),
    /// Constant map at a fixed unit quaternion.
    Const(Quaternion),
    /// Deliberately non-equivariant perturbation
    /// `exp(s pi Im(w)) b(p,w)`; exploratory only.
    DemoNonequiv(f64),
}

impl GroupMap {
    pub fn eval(&self, x: &PointS6) -> Result<Quaternion> {
        match *self {
            GroupMap::Bm => Ok(bm(x)),
            GroupMap::BmPow(n) => Ok(bm_pow(n, x)),
            GroupMap::H(s) => homotopy_h(s, x),
            GroupMap::HPow { s, k } => Ok(homotopy_h(s, x)?.unit_powi(k)),
            GroupMap::Q => Ok(rational_q(x)),
            GroupMap::QPow(k) => Ok(rational_q(x).unit_powi(k)),
            GroupMap::Const(q) => Ok(q),
            GroupMap::DemoNonequiv(s) => {
                Ok(quat_exp(x.w.im().scale(s * PI)) * bm(x))
            }
        }
    }

    /// Pointwise k-th power of this map.
    pub fn pow(&self, k: i32) -> GroupMap {
        match *self {
            GroupMap::Bm => GroupMap::BmPow(k),
            GroupMap::BmPow(n) => GroupMap::BmPow(n * k),
            GroupMap::H(s) => GroupMap::HPow { s, k },
            GroupMap::HPow { s, k: k0 } => GroupMap::HPow { s, k: k0 * k },
            GroupMap::Q => GroupMap::QPow(k),
            GroupMap::QPow(n) => GroupMap::QPow(n * k),
            GroupMap::Const(q) => GroupMap::Const(q.unit_powi(k)),
            GroupMap::DemoNonequiv(s) => GroupMap::DemoNonequiv(s),
        }
    }
}

/// Self-maps of S^6 known to the registry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelfMap {
    Sigma(i32),
    R,
    /// The exotic involution -sigma.
    InvSigma,
    /// The rational exotic involution -R.
    InvR,
    /// The deformed involution -J_{H_s}.
    InvH(f64),
    /// The J-process of any registered group-valued map.
    J(GroupMap),
    Antipodal,
    Identity,
}

impl SelfMap {
    pub fn eval(&self, x: &PointS6) -> Result<PointS6> {
        match *self {
            SelfMap::Sigma(k) => Ok(sigma_k(k, x)),
            SelfMap::R => Ok(rational_r(x)),
            SelfMap::InvSigma => Ok(antipodal(&sigma_k(1, x))),
            SelfMap::InvR => Ok(antipodal(&rational_r(x))),
            SelfMap::InvH(s) => exotic_involution(s, x),
            SelfMap::J(alpha) => j_process(&alpha, x),
            SelfMap::Antipodal => Ok(antipodal(x)),
            SelfMap::Identity => Ok(*x),
        }
    }
}

/// A map name from the CLI registry, either group-valued or a self-map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedMap {
    Group(GroupMap),
    SelfMap(SelfMap),
}

/// Parse a registry name: `bm`, `bm_pow:<n>`, `H:<s>`, `Q`, `sigma:<k>`,
/// `R`, `inv_sigma`, `inv_R`, `inv_H:<s>`.
pub fn parse_map(name: &str) -> Result<NamedMap> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let int_arg = |a: Option<&str>| -> Result<i32> {
        a.ok_or_else(|| Error::UnknownMap(name.to_string()))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer argument in `{name}`")))
    };
    let s_arg = |a: Option<&str>| -> Result<f64> {
        let s: f64 = a
            .ok_or_else(|| Error::UnknownMap(name.to_string()))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad real argument in `{name}`")))?;
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfDomain { value: s });
        }
        Ok(s)
    };
    match head {
        "bm" if arg.is_none() => Ok(NamedMap::Group(GroupMap::Bm)),
        "bm_pow" => Ok(NamedMap::Group(GroupMap::BmPow(int_arg(arg)?))),
        "H" => Ok(NamedMap::Group(GroupMap::H(s_arg(arg)?))),
        "Q" if arg.is_none() => Ok(NamedMap::Group(GroupMap::Q)),
        "sigma" => Ok(NamedMap::SelfMap(SelfMap::Sigma(int_arg(arg)?))),
        "R" if arg.is_none() => Ok(NamedMap::SelfMap(SelfMap::R)),
        "inv_sigma" if arg.is_none() => Ok(NamedMap::SelfMap(SelfMap::InvSigma)),
        "inv_R" if arg.is_none() => Ok(NamedMap::SelfMap(SelfMap::InvR)),
        "inv_H" => Ok(NamedMap::SelfMap(SelfMap::InvH(s_arg(arg)?))),
        _ => Err(Error::UnknownMap(name.to_string())),
    }
}

/// One-parameter families of group-valued maps for the degeneracy sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapFamily {
    /// The equivariant homotopy H_s.
    H,
    /// Pointwise powers H_s^k.
    HPow(i32),
    /// The non-equivariant demonstration perturbation.
    DemoNonequiv,
}

impl MapFamily {
    pub fn at(&self, s: f64) -> GroupMap {
        match *self {
            MapFamily::H => GroupMap::H(s),
            MapFamily::HPow(k) => GroupMap::HPow { s, k },
            MapFamily::DemoNonequiv => GroupMap::DemoNonequiv(s),
        }
    }

    pub fn is_equivariant(&self) -> bool {
        !matches!(self, MapFamily::DemoNonequiv)
    }

    pub fn parse(name: &str) -> Result<MapFamily> {
        match name.split_once(':') {
            None if name == "H" => Ok(MapFamily::H),
            None if name == "demo_nonequiv" => Ok(MapFamily::DemoNonequiv),
            Some(("H_pow", k)) => Ok(MapFamily::HPow(
                k.parse()
                    .map_err(|_| Error::Parse(format!("bad power in `{name}`")))?,
            )),
            _ => Err(Error::UnknownFamily(name.to_string())),
        }
    }
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapFamily::H => write!(f, "H"),
            MapFamily::HPow(k) => write!(f, "H_pow:{k}"),
            MapFamily::DemoNonequiv => write!(f, "demo_nonequiv"),
        }
    }
}
