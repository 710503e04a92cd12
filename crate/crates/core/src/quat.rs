//! Quaternion arithmetic, the exponential map on unit quaternions, and
//! conjugation actions.
//!
//! Quaternions are stored as four reals in `(scalar, i, j, k)` order; this
//! ordering is the serialization contract for the CLI (`[a,b,c,d]` in JSON).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Unit-ness is checked at operation boundaries with this tolerance rather
/// than encoded in the type; renormalization drift is something the verify
/// suites measure, not something we hide.
pub const UNIT_TOL: f64 = 1e-9;

/// Below this magnitude `exp` switches to a truncated series for
/// `sin(|x|)/|x|`; the closed form has a removable singularity at 0.
const EXP_SMALL_ANGLE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub const fn scalar(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_array([a, b, c, d]: [f64; 4]) -> Self {
        Quaternion::new(a, b, c, d)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn re(self) -> f64 {
        self.a
    }

    /// Imaginary part as a pure-imaginary quaternion.
    pub fn im(self) -> PureImaginary {
        PureImaginary::new(self.b, self.c, self.d)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sq(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.conj() * (1.0 / n2))
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() < UNIT_TOL
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self * (1.0 / n))
    }

    /// Integer power of a quaternion by repeated multiplication.
    pub fn powi(self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self };
        let mut acc = Quaternion::ONE;
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    /// Integer power of a unit quaternion; negative exponents use the
    /// conjugate as the inverse.
    pub fn unit_powi(self, n: i32) -> Self {
        let base = if n < 0 { self.conj() } else { self };
        let mut acc = Quaternion::ONE;
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    /// Euclidean distance between quaternions as 4-vectors.
    pub fn dist(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a * r.a - self.b * r.b - self.c * r.c - self.d * r.d,
            self.a * r.b + self.b * r.a + self.c * r.d - self.d * r.c,
            self.a * r.c - self.b * r.d + self.c * r.a + self.d * r.b,
            self.a * r.d + self.b * r.c - self.c * r.b + self.d * r.a,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}{:+}i{:+}j{:+}k", self.a, self.b, self.c, self.d)
    }
}

/// Quaternion with scalar part identically zero, by construction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PureImaginary {
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PureImaginary {
    pub const ZERO: PureImaginary = PureImaginary::new(0.0, 0.0, 0.0);

    pub const fn new(b: f64, c: f64, d: f64) -> Self {
        PureImaginary { b, c, d }
    }

    pub fn from_array([b, c, d]: [f64; 3]) -> Self {
        PureImaginary::new(b, c, d)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    pub fn as_quat(self) -> Quaternion {
        Quaternion::new(0.0, self.b, self.c, self.d)
    }

    pub fn norm_sq(self) -> f64 {
        self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        PureImaginary::new(self.b * s, self.c * s, self.d * s)
    }
}

impl Neg for PureImaginary {
    type Output = PureImaginary;
    fn neg(self) -> PureImaginary {
        PureImaginary::new(-self.b, -self.c, -self.d)
    }
}

impl From<PureImaginary> for Quaternion {
    fn from(p: PureImaginary) -> Quaternion {
        p.as_quat()
    }
}

/// Exponential map of the Lie group of unit quaternions:
/// `e^x = cos(|x|) + sin(|x|) x/|x|`, with a series fallback for small `|x|`.
pub fn quat_exp(x: PureImaginary) -> Quaternion {
    let t = x.norm();
    let sinc = if t < EXP_SMALL_ANGLE {
        // sin(t)/t = 1 - t^2/6 + O(t^4); at t < 1e-8 the quadratic term is
        // below f64 resolution already.
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    };
    Quaternion::new(t.cos(), x.b * sinc, x.c * sinc, x.d * sinc)
}

/// Conjugation action `C_q(x) = q x q̄` of a unit quaternion.
///
/// Preserves `Re(x)` and `|x|`.
pub fn conj_action(q: Quaternion, x: Quaternion) -> Result<Quaternion> {
    if !q.is_unit() {
        return Err(Error::NotUnit { what: "conjugator", norm: q.norm() });
    }
    Ok(q * x * q.conj())
}

/// Conjugation without the unit check, for inner loops where the caller
/// guarantees the precondition.
#[inline]
pub(crate) fn conj_by(q: Quaternion, x: Quaternion) -> Quaternion {
    q * x * q.conj()
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        for v in self.to_array() {
            t.serialize_element(&v)?;
        }
        t.end()
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let arr = <[f64; 4]>::deserialize(d)?;
        Ok(Quaternion::from_array(arr))
    }
}

impl Serialize for PureImaginary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        for v in self.to_array() {
            t.serialize_element(&v)?;
        }
        t.end()
    }
}

impl<'de> Deserialize<'de> for PureImaginary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = PureImaginary;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array [b, c, d]")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<PureImaginary, A::Error> {
                let b = seq.next_element()?.unwrap_or(0.0);
                let c = seq.next_element()?.unwrap_or(0.0);
                let d = seq.next_element()?.unwrap_or(0.0);
                Ok(PureImaginary::new(b, c, d))
            }
        }
        d.deserialize_seq(V)
    }
}
