use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot invert a quaternion of zero norm")]
    ZeroNorm,

    #[error("{what} must be a unit quaternion (norm = {norm})")]
    NotUnit { what: &'static str, norm: f64 },

    #[error("point is not on S^6: |p|^2 + |w|^2 = {norm_sq}")]
    NotOnSphere { norm_sq: f64 },

    #[error("ambient vector is not unit length (norm = {norm})")]
    NotUnitVector { norm: f64 },

    #[error("point is off the S^5 slice: Re(w) = {re_w}")]
    OffSlice { re_w: f64 },

    #[error("argument {value} outside the domain [0, 1]")]
    OutOfDomain { value: f64 },

    #[error("homotopy degenerated at s = {s}: |H_hat| = {norm}")]
    DegenerateHomotopy { s: f64, norm: f64 },

    #[error("finite-difference step {h} outside [1e-7, 1e-3]")]
    BadStep { h: f64 },

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
