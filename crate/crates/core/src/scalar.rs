//! Scalars: complex doubles, exact phases in `Q/Z`, and printing.

use std::f64::consts::TAU;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type C64 = num_complex::Complex64;

/// Global comparison tolerance for floating-point category data.
pub const TOLERANCE: f64 = 1e-9;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn approx_eq(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

/// Integer power of a complex number; negative exponents invert.
pub fn powi(z: C64, e: i64) -> C64 {
    let mut base = if e < 0 { z.inv() } else { z };
    let mut e = e.unsigned_abs();
    let mut acc = C64::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// An element of `Q/Z`, stored reduced with numerator in `[0, denominator)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub fn zero() -> Self {
        Phase(Ratio::zero())
    }

    pub fn new(numer: i64, denom: i64) -> Self {
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let (n, d) = (*r.numer(), *r.denom());
        Phase(Ratio::new(n.mod_floor(&d), d))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// `exp(2πi·self)`.
    pub fn to_complex(&self) -> C64 {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        // reduce by symmetry so that exact quarter turns come out exact
        match (n * 4).checked_rem(d) {
            Some(0) => match n * 4 / d {
                0 => C64::one(),
                1 => C64::i(),
                2 => -C64::one(),
                _ => -C64::i(),
            },
            _ => C64::from_polar(1.0, TAU * n as f64 / d as f64),
        }
    }

    pub fn scale(&self, k: i64) -> Phase {
        Phase::from_ratio(self.0 * Ratio::from_integer(k))
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_ratio(-self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl std::str::FromStr for Phase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| format!("bad rational '{s}'"))?;
        let d: i64 = d.parse().map_err(|_| format!("bad rational '{s}'"))?;
        if d == 0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        Ok(Phase::new(n, d))
    }
}

/// Formats a real with 12 significant digits, trimming trailing zeros.
pub fn format_real(x: f64) -> String {
    if x.abs() < 1e-12 || x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{:.11e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let plain = format!("{:.*}", decimals, x);
        trim_zeros(&plain)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".to_string() } else { t.to_string() }
    } else {
        s.to_string()
    }
}

/// `re±im i`, 12 significant digits per part.
pub fn format_complex(z: C64) -> String {
    let re = format_real(z.re);
    let im = format_real(z.im);
    if let Some(stripped) = im.strip_prefix('-') {
        format!("{re}-{stripped}i")
    } else {
        format!("{re}+{im}i")
    }
}
