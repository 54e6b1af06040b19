//! Exact complex scalars: Gaussian rationals `re + im·i` with arbitrary
//! precision rational parts.
//!
//! Every operation in the linear-algebra core is carried out in this field,
//! so subspace computations, bigradings and splitting operators are exact.
//! Floating point enters only at the boundary (norms, fractional powers,
//! quadrature), and a finite `f64` can always be promoted back into the
//! field losslessly via [`GaussianRational::from_f64`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Parse a rational from `"a"` or `"a/b"` (optional sign, arbitrary size).
pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator {num:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("invalid rational denominator {den:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rat::new(n, d))
}

/// Canonical string form: `"a"` for integers, `"a/b"` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact promotion of a finite `f64` into the rationals.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_f64(x).expect("cannot promote a non-finite float to a rational")
}

/// Nearest dyadic rational with about `bits` significant bits.
pub fn rat_round_bits(r: &Rat, bits: u32) -> Rat {
    if r.is_zero() {
        return Rat::zero();
    }
    let size = r.numer().bits().max(1) as i64 - r.denom().bits() as i64;
    // scale into [2^bits, 2^{bits+1}), round, scale back
    let shift = bits as i64 - size;
    let scaled = if shift >= 0 {
        r * Rat::from_integer(BigInt::from(1) << shift as u64)
    } else {
        r / Rat::from_integer(BigInt::from(1) << (-shift) as u64)
    };
    let rounded = Rat::from_integer(scaled.round().to_integer());
    if shift >= 0 {
        rounded / Rat::from_integer(BigInt::from(1) << shift as u64)
    } else {
        rounded * Rat::from_integer(BigInt::from(1) << (-shift) as u64)
    }
}

/// Gaussian rational `re + im·i`, the exact scalar field of the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        Self {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    /// `a/b` as a real scalar. Panics if `b == 0`.
    pub fn from_frac(a: i64, b: i64) -> Self {
        assert!(b != 0, "zero denominator");
        Self::from_rat(Rat::new(BigInt::from(a), BigInt::from(b)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    /// Exact promotion of finite floats; the result equals the dyadic value
    /// of the input bit for bit.
    pub fn from_f64(re: f64, im: f64) -> Self {
        Self {
            re: rat_from_f64(re),
            im: rat_from_f64(im),
        }
    }

    /// Round to a dyadic with roughly `bits` significant bits per part.
    /// Used to cap coefficient growth where only coarse tolerances apply.
    pub fn round_bits(&self, bits: u32) -> Self {
        Self {
            re: rat_round_bits(&self.re, bits),
            im: rat_round_bits(&self.im, bits),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate; the unique involutive field automorphism fixing ℚ.
    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|²` as an exact nonnegative rational.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero scalar");
        Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    /// Nearest-float approximation `(re, im)`.
    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// `|z|` in floating point.
    pub fn abs_f64(&self) -> f64 {
        rat_to_f64(&self.norm_sqr()).sqrt()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
        }
    }
}

/// Rational to nearest `f64`, robust for numerators/denominators far outside
/// the float range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Fall back to a scaled conversion: r = m · 2^e with m in float range.
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift > 0 {
        Rat::new(num.clone(), den.clone() << shift as u64)
    } else {
        Rat::new(num.clone() << (-shift) as u64, den.clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", rat_to_string(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", rat_to_string(&self.im))
        } else if self.im.is_negative() {
            write!(
                f,
                "{}{}i",
                rat_to_string(&self.re),
                rat_to_string(&self.im)
            )
        } else {
            write!(
                f,
                "{}+{}i",
                rat_to_string(&self.re),
                rat_to_string(&self.im)
            )
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = (&*self).mul(rhs);
    }
}

impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: Self) -> Self {
        (&self).mul(&rhs.inv())
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.mul(&rhs.inv())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(
            Rat::new(BigInt::from(a), BigInt::from(1)),
            Rat::new(BigInt::from(b), BigInt::from(1)),
        )
    }

    #[test]
    fn field_ops() {
        let x = q(3, -2);
        let y = q(-1, 5);
        let z = (&x * &y) + q(7, 0);
        assert_eq!(z, q(3 * -1 - -2 * 5 + 7, 3 * 5 + -2 * -1));
        let w = &z / &y;
        assert_eq!(&w * &y, z);
    }

    #[test]
    fn conjugation_is_involutive_automorphism() {
        let x = q(2, 3);
        let y = q(-5, 7);
        assert_eq!(x.conj().conj(), x);
        assert_eq!((&x * &y).conj(), (&x.conj() * &y.conj()));
        assert_eq!((&x + &y).conj(), (&x.conj() + &y.conj()));
        assert!(q(4, 0).conj() == q(4, 0));
        assert!(q(0, 1).conj() != q(0, 1));
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = GaussianRational::from_f64(0.1, -3.75e-200);
        let (re, im) = x.to_f64();
        assert_eq!(re, 0.1);
        assert_eq!(im, -3.75e-200);
    }

    #[test]
    fn huge_rationals_to_f64() {
        let big = Rat::new(BigInt::from(1) << 4000, BigInt::from(3) << 2000);
        let x = rat_to_f64(&big);
        assert!(x.is_finite() || x.is_infinite());
        let tiny = Rat::new(BigInt::from(7), BigInt::from(1) << 2000);
        assert_eq!(rat_to_f64(&tiny), 0.0);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_from_str("-3/6").unwrap(), Rat::new((-1).into(), 2.into()));
        assert_eq!(rat_to_string(&rat_from_str("8/4").unwrap()), "2");
        assert!(rat_from_str("1/0").is_err());
    }
}
