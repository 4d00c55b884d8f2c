//! The scalar abstraction shared by every floating-point routine.
//!
//! Numerical code is written once against [`Real`] and runs either on
//! `f64` (fast, 53 bits) or on [`BigFloat`] (binary floating point with a
//! configurable mantissa, default [`DEFAULT_PRECISION`] bits). Exact values
//! enter through [`Real::from_rational`] and leave through
//! [`Real::to_sci`].

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{Consts, Radix, RoundingMode, Sign};
use num_bigint::Sign as IntSign;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Mantissa precision in bits.
pub type Precision = usize;

pub const DEFAULT_PRECISION: Precision = 256;

const RM: RoundingMode = RoundingMode::ToEven;

/// Real scalar used by the quadrature, Fourier and series code.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Working precision of this value in bits.
    fn precision(&self) -> Precision;

    /// Nearest representable value to `q`.
    fn from_rational(q: &Rational, prec: Precision) -> Self;
    fn from_i64(v: i64, prec: Precision) -> Self;
    /// Exact conversion of a double.
    fn from_f64(v: f64, prec: Precision) -> Self;
    fn pi(prec: Precision) -> Self;

    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    fn powi(&self, n: i64) -> Self;
    /// `self^y` for `self > 0`.
    fn powf(&self, y: &Self) -> Self;

    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;

    /// Scientific notation with `digits` significant digits, in the same
    /// shape as Rust's `{:.N e}` formatting (`1.2500e-3`).
    fn to_sci(&self, digits: usize) -> String;

    fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero(self.precision())
    }

    /// `2^k` exactly.
    fn exp2(k: i64, prec: Precision) -> Self {
        Self::from_i64(2, prec).powi(k)
    }

    /// Unit roundoff scale `2^(1 - prec)`.
    fn epsilon(prec: Precision) -> Self {
        Self::exp2(1 - prec as i64, prec)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Fractional part `x - floor(x)`, in `[0, 1)`.
    fn fract(&self) -> Self {
        self.clone() - self.floor()
    }

    fn sin_cos(&self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
}

impl Real for f64 {
    fn precision(&self) -> Precision {
        53
    }
    fn from_rational(q: &Rational, _prec: Precision) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn from_i64(v: i64, _prec: Precision) -> Self {
        v as f64
    }
    fn from_f64(v: f64, _prec: Precision) -> Self {
        v
    }
    fn pi(_prec: Precision) -> Self {
        std::f64::consts::PI
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn powi(&self, n: i64) -> Self {
        f64::powi(*self, n as i32)
    }
    fn powf(&self, y: &Self) -> Self {
        f64::powf(*self, *y)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_sci(&self, digits: usize) -> String {
        format!("{:.*e}", digits.max(1) - 1, self)
    }
    fn exp2(k: i64, _prec: Precision) -> Self {
        2f64.powi(k as i32)
    }
    fn epsilon(_prec: Precision) -> Self {
        f64::EPSILON
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Arbitrary-precision binary floating-point value.
///
/// Arithmetic between two values runs at the larger of their precisions,
/// rounding to nearest-even.
#[derive(Clone)]
pub struct BigFloat {
    inner: astro_float::BigFloat,
    prec: Precision,
}

impl BigFloat {
    fn wrap(inner: astro_float::BigFloat, prec: Precision) -> Self {
        BigFloat { inner, prec }
    }

    fn word_prec(prec: Precision) -> usize {
        prec.max(64)
    }

    /// Exact conversion of an arbitrary integer.
    fn from_bigint(n: &num_bigint::BigInt) -> Self {
        if let Some(v) = n.to_i64() {
            let p = 64;
            return Self::wrap(astro_float::BigFloat::from_i64(v, p), p);
        }
        let (sign, mag) = n.to_radix_be(16);
        let p = Self::word_prec(4 * mag.len() + 64);
        let sign = if sign == IntSign::Minus { Sign::Neg } else { Sign::Pos };
        let v = with_consts(|cc| {
            astro_float::BigFloat::convert_from_radix(
                sign,
                &mag,
                mag.len() as i32,
                Radix::Hex,
                p,
                RM,
                cc,
            )
        });
        Self::wrap(v, p)
    }

    /// The same value rounded to `prec` bits.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut v = self.inner.clone();
        // Only fails for an out-of-range precision, which callers never pass.
        let _ = v.set_precision(Self::word_prec(prec), RM);
        Self::wrap(v, prec)
    }

    fn p2(&self, other: &Self) -> Precision {
        self.prec.max(other.prec)
    }

    /// Decimal digits `(negative, digits, exponent)` with value
    /// `0.d1 d2 ... * 10^exponent`.
    fn decimal_digits(&self) -> Option<(bool, Vec<u8>, i64)> {
        let (s, d, e) = with_consts(|cc| self.inner.convert_to_radix(Radix::Dec, RM, cc)).ok()?;
        Some((s == Sign::Neg, d, e as i64))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, {} bits)", self.to_sci(25), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p + 1).unwrap_or(decimal_digits_for(self.prec));
        f.write_str(&self.to_sci(digits))
    }
}

/// `digits` significant digits in positional notation when the decimal
/// exponent lies in `-6..21`, scientific notation otherwise.
pub fn format_decimal<F: Real>(x: &F, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sci = x.to_sci(digits);
    let Some((mant, exp)) = sci.split_once('e') else {
        return sci;
    };
    let Ok(e) = exp.parse::<i64>() else {
        return sci;
    };
    if !(-6..21).contains(&e) {
        return sci;
    }
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant),
    };
    let ds: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-e - 1) as usize));
        out.push_str(&ds);
    } else {
        let int_len = e as usize + 1;
        if ds.len() <= int_len {
            out.push_str(&ds);
            out.extend(std::iter::repeat('0').take(int_len - ds.len()));
        } else {
            out.push_str(&ds[..int_len]);
            out.push('.');
            out.push_str(&ds[int_len..]);
        }
    }
    out
}

/// Number of decimal digits carried by a `prec`-bit mantissa.
pub fn decimal_digits_for(prec: Precision) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.inner.cmp(&other.inner) == Some(0)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.inner.cmp(&other.inner).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'a BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl<'a, 'b> $trait<&'b BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'b BigFloat) -> BigFloat {
                let p = self.p2(rhs);
                BigFloat::wrap(self.inner.$op(&rhs.inner, BigFloat::word_prec(p), RM), p)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl AddAssign for BigFloat {
    fn add_assign(&mut self, rhs: BigFloat) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for BigFloat {
    fn sub_assign(&mut self, rhs: BigFloat) {
        *self = &*self - &rhs;
    }
}

impl MulAssign for BigFloat {
    fn mul_assign(&mut self, rhs: BigFloat) {
        *self = &*self * &rhs;
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(self.inner.neg(), self.prec)
    }
}

impl Real for BigFloat {
    fn precision(&self) -> Precision {
        self.prec
    }

    fn from_rational(q: &Rational, prec: Precision) -> Self {
        if q.is_zero() {
            return Self::zero(prec);
        }
        let n = Self::from_bigint(q.numer());
        let d = Self::from_bigint(q.denom());
        let p = Self::word_prec(prec);
        Self::wrap(n.inner.div(&d.inner, p, RM), prec)
    }

    fn from_i64(v: i64, prec: Precision) -> Self {
        Self::wrap(astro_float::BigFloat::from_i64(v, Self::word_prec(prec)), prec)
    }

    fn from_f64(v: f64, prec: Precision) -> Self {
        Self::wrap(astro_float::BigFloat::from_f64(v, Self::word_prec(prec)), prec)
    }

    fn pi(prec: Precision) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(Self::word_prec(prec), RM)), prec)
    }

    fn sin(&self) -> Self {
        let p = Self::word_prec(self.prec);
        Self::wrap(with_consts(|cc| self.inner.sin(p, RM, cc)), self.prec)
    }

    fn cos(&self) -> Self {
        let p = Self::word_prec(self.prec);
        Self::wrap(with_consts(|cc| self.inner.cos(p, RM, cc)), self.prec)
    }

    fn exp(&self) -> Self {
        let p = Self::word_prec(self.prec);
        Self::wrap(with_consts(|cc| self.inner.exp(p, RM, cc)), self.prec)
    }

    fn ln(&self) -> Self {
        let p = Self::word_prec(self.prec);
        Self::wrap(with_consts(|cc| self.inner.ln(p, RM, cc)), self.prec)
    }

    fn sqrt(&self) -> Self {
        Self::wrap(self.inner.sqrt(Self::word_prec(self.prec), RM), self.prec)
    }

    fn abs(&self) -> Self {
        Self::wrap(self.inner.abs(), self.prec)
    }

    fn floor(&self) -> Self {
        Self::wrap(self.inner.floor(), self.prec)
    }

    fn powi(&self, n: i64) -> Self {
        let p = Self::word_prec(self.prec);
        let pos = self.inner.powi(n.unsigned_abs() as usize, p, RM);
        if n >= 0 {
            Self::wrap(pos, self.prec)
        } else {
            Self::wrap(pos.reciprocal(p, RM), self.prec)
        }
    }

    fn powf(&self, y: &Self) -> Self {
        let prec = self.p2(y);
        let p = Self::word_prec(prec) + 32;
        let v = with_consts(|cc| {
            let l = self.inner.ln(p, RM, cc);
            l.mul(&y.inner, p, RM).exp(p, RM, cc)
        });
        Self::wrap(v, prec).with_precision(prec)
    }

    fn to_f64(&self) -> f64 {
        self.to_sci(20).parse().unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        !self.inner.is_nan() && !self.inner.is_inf()
    }

    fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.inner.is_nan() {
            return "NaN".into();
        }
        if self.inner.is_inf() {
            return if self.inner.is_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.inner.is_zero() {
            return format_sci(false, &[], 0, digits);
        }
        match self.decimal_digits() {
            Some((neg, d, e)) => {
                let (d, e) = round_digits(&d, e, digits);
                format_sci(neg, &d, e - 1, digits)
            }
            None => "NaN".into(),
        }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn exp2(k: i64, prec: Precision) -> Self {
        let mut one = astro_float::BigFloat::from_word(1, Self::word_prec(prec));
        one.set_exponent(1 + k as i32);
        Self::wrap(one, prec)
    }
}

/// Rounds the digit string `0.d1 d2 ...` to `n` digits, half away from
/// zero, returning the rounded digits and possibly bumped exponent.
fn round_digits(d: &[u8], e: i64, n: usize) -> (Vec<u8>, i64) {
    let first = d.iter().position(|&x| x != 0).unwrap_or(0);
    let d = &d[first..];
    let e = e - first as i64;
    if d.len() <= n {
        let mut out = d.to_vec();
        out.resize(n, 0);
        return (out, e);
    }
    let mut out = d[..n].to_vec();
    if d[n] >= 5 {
        let mut i = n;
        loop {
            if i == 0 {
                out.insert(0, 1);
                out.truncate(n);
                return (out, e + 1);
            }
            i -= 1;
            if out[i] == 9 {
                out[i] = 0;
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    (out, e)
}

fn format_sci(neg: bool, d: &[u8], exp10: i64, n: usize) -> String {
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    let digit = |i: usize| (b'0' + d.get(i).copied().unwrap_or(0)) as char;
    s.push(digit(0));
    if n > 1 {
        s.push('.');
        for i in 1..n {
            s.push(digit(i));
        }
    }
    s.push('e');
    s.push_str(&exp10.to_string());
    s
}

/// π at `prec` bits.
pub fn pi_const(prec: Precision) -> BigFloat {
    BigFloat::pi(prec.max(32))
}

/// `true` when `|a - b| <= tol * max(|a|, |b|)`, or `|a - b| <= tol` when
/// both are below one in magnitude.
pub fn close<F: Real>(a: &F, b: &F, tol: &F) -> bool {
    let p = a.precision();
    let scale = a.abs().max(b.abs()).max(F::one(p));
    (a.clone() - b.clone()).abs() <= tol.clone() * scale
}

/// Magnitude-aware comparison of a `Real` against an exact rational.
pub fn rational_abs_f64(q: &Rational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}
