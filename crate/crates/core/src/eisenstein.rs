//! Exact arithmetic in `Q(ζ)` with `ζ = e^{2πi/6}`.
//!
//! Elements are stored on the basis `{1, ζ}` and reduced with `ζ² = ζ − 1`.
//! The ring of integers is `Γ_ζ = Z[ζ]`; the suborder `Γ_{2ζ} = Z[2ζ]` and the
//! ideal `2Γ_ζ` show up as entry constraints for lattice-preserving matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element `a + bζ` of `Q(ζ)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisRat {
    a: Rational,
    b: Rational,
}

/// The three integral structures used in the constraint set of the automorphism search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `Γ_ζ = Z[ζ]`
    Full,
    /// `Γ_{2ζ} = Z[2ζ]`
    TwoZeta,
    /// the ideal `2Γ_ζ`
    TwiceFull,
}

impl EisRat {
    pub fn new(a: Rational, b: Rational) -> Self {
        EisRat { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        EisRat::new(rat(a), rat(b))
    }

    pub fn from_rational(q: Rational) -> Self {
        EisRat::new(q, Rational::zero())
    }

    pub fn zero() -> Self {
        EisRat::from_ints(0, 0)
    }

    pub fn one() -> Self {
        EisRat::from_ints(1, 0)
    }

    pub fn zeta() -> Self {
        EisRat::from_ints(0, 1)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Complex conjugate; `ζ̄ = 1 − ζ`.
    pub fn conj(&self) -> Self {
        EisRat::new(&self.a + &self.b, -&self.b)
    }

    /// `|x|² = a² + ab + b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(EisRat::new(c.a / &n, c.b / n))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        EisRat::new(&self.a * q, &self.b * q)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// True iff `x` is one of the six units `±1, ±ζ, ±ζ²` of `Γ_ζ`.
    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().is_one()
    }

    pub fn in_order(&self, order: Order) -> bool {
        if !self.is_integral() {
            return false;
        }
        let even = |q: &Rational| q.to_integer() % BigInt::from(2) == BigInt::zero();
        match order {
            Order::Full => true,
            Order::TwoZeta => even(&self.b),
            Order::TwiceFull => even(&self.a) && even(&self.b),
        }
    }

    /// Real/imaginary decomposition of `x/√3`.
    pub fn over_sqrt3(&self) -> ReIm {
        let half = ratio(1, 2);
        ReIm {
            re_coeff: &self.a + &self.b * &half,
            im: &self.b * half,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = EisRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer coordinates, when both are integers that fit in `i64`.
    pub fn to_int(&self) -> Option<EisInt> {
        if !self.is_integral() {
            return None;
        }
        Some(EisInt::new(self.a.to_integer().to_i64()?, self.b.to_integer().to_i64()?))
    }
}

impl fmt::Debug for EisRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for EisRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = |q: &Rational| -> String {
            if q.is_one() {
                String::new()
            } else {
                format!("{}", q)
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if (-&self.b).is_one() => write!(f, "-ζ"),
            (true, false) => write!(f, "{}ζ", coeff(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                write!(f, "{} {} {}ζ", self.a, sign, coeff(&self.b.abs()))
            }
        }
    }
}

impl<'a> Add<&'a EisRat> for &'a EisRat {
    type Output = EisRat;
    fn add(self, o: &EisRat) -> EisRat {
        EisRat::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a EisRat> for &'a EisRat {
    type Output = EisRat;
    fn sub(self, o: &EisRat) -> EisRat {
        EisRat::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a EisRat> for &'a EisRat {
    type Output = EisRat;
    fn mul(self, o: &EisRat) -> EisRat {
        // (a + bζ)(c + dζ) = ac + (ad + bc)ζ + bd(ζ − 1)
        let bd = &self.b * &o.b;
        EisRat::new(
            &self.a * &o.a - &bd,
            &self.a * &o.b + &self.b * &o.a + bd,
        )
    }
}

impl Neg for &EisRat {
    type Output = EisRat;
    fn neg(self) -> EisRat {
        EisRat::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<EisRat> for EisRat {
            type Output = EisRat;
            fn $m(self, o: EisRat) -> EisRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for EisRat {
    type Output = EisRat;
    fn neg(self) -> EisRat {
        -&self
    }
}

/// Exact carrier for `re_coeff/√3 + im·i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReIm {
    pub re_coeff: Rational,
    pub im: Rational,
}

impl ReIm {
    /// Inverse of [`EisRat::over_sqrt3`]: returns `x` with `x/√3 = self`.
    pub fn times_sqrt3(&self) -> EisRat {
        let b = &self.im * rat(2);
        EisRat::new(&self.re_coeff - &self.im, b)
    }
}

/// Machine-integer element of `Z[ζ]`, for hot loops in the generator search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisInt {
    pub a: i64,
    pub b: i64,
}

impl EisInt {
    pub const fn new(a: i64, b: i64) -> Self {
        EisInt { a, b }
    }

    pub fn mul(self, o: EisInt) -> EisInt {
        let bd = self.b * o.b;
        EisInt::new(self.a * o.a - bd, self.a * o.b + self.b * o.a + bd)
    }

    pub fn add(self, o: EisInt) -> EisInt {
        EisInt::new(self.a + o.a, self.b + o.b)
    }

    pub fn sub(self, o: EisInt) -> EisInt {
        EisInt::new(self.a - o.a, self.b - o.b)
    }

    pub fn neg(self) -> EisInt {
        EisInt::new(-self.a, -self.b)
    }

    pub fn norm(self) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn to_rat(self) -> EisRat {
        EisRat::from_ints(self.a, self.b)
    }
}

/// A 2×2 matrix over `Q(ζ)`, acting on column vectors `(z₁, z₂)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EisMatrix {
    pub m: [[EisRat; 2]; 2],
}

impl fmt::Debug for EisMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for EisMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl EisMatrix {
    pub fn new(m00: EisRat, m01: EisRat, m10: EisRat, m11: EisRat) -> Self {
        EisMatrix { m: [[m00, m01], [m10, m11]] }
    }

    /// Shorthand: each entry given as `(a, b)` meaning `a + bζ`.
    pub fn from_ints(e: [[(i64, i64); 2]; 2]) -> Self {
        let c = |(a, b): (i64, i64)| EisRat::from_ints(a, b);
        EisMatrix::new(c(e[0][0]), c(e[0][1]), c(e[1][0]), c(e[1][1]))
    }

    pub fn identity() -> Self {
        EisMatrix::from_ints([[(1, 0), (0, 0)], [(0, 0), (1, 0)]])
    }

    pub fn zero() -> Self {
        EisMatrix::from_ints([[(0, 0); 2]; 2])
    }

    pub fn entry(&self, i: usize, j: usize) -> &EisRat {
        &self.m[i][j]
    }

    fn map(&self, f: impl Fn(&EisRat) -> EisRat) -> Self {
        EisMatrix::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    pub fn conj(&self) -> Self {
        self.map(EisRat::conj)
    }

    pub fn transpose(&self) -> Self {
        EisMatrix::new(
            self.m[0][0].clone(),
            self.m[1][0].clone(),
            self.m[0][1].clone(),
            self.m[1][1].clone(),
        )
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map(|x| x.scale(q))
    }

    pub fn scale_eis(&self, s: &EisRat) -> Self {
        self.map(|x| s * x)
    }

    pub fn det(&self) -> EisRat {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det().inverse()?;
        Some(EisMatrix::new(
            &self.m[1][1] * &d,
            -(&self.m[0][1] * &d),
            -(&self.m[1][0] * &d),
            &self.m[0][0] * &d,
        ))
    }

    pub fn apply(&self, v: &(EisRat, EisRat)) -> (EisRat, EisRat) {
        (
            &self.m[0][0] * &v.0 + &self.m[0][1] * &v.1,
            &self.m[1][0] * &v.0 + &self.m[1][1] * &v.1,
        )
    }

    pub fn add(&self, o: &EisMatrix) -> Self {
        EisMatrix::new(
            &self.m[0][0] + &o.m[0][0],
            &self.m[0][1] + &o.m[0][1],
            &self.m[1][0] + &o.m[1][0],
            &self.m[1][1] + &o.m[1][1],
        )
    }

    pub fn mul(&self, o: &EisMatrix) -> Self {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        EisMatrix::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(EisMatrix::identity(), |acc, _| acc.mul(self))
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.conj_transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(a: i64, b: i64) -> EisRat {
        EisRat::from_ints(a, b)
    }

    #[test]
    fn zeta_squared_reduces() {
        assert_eq!(&EisRat::zeta() * &EisRat::zeta(), z(-1, 1));
        let x = EisRat::new(ratio(3, 7), ratio(-2, 5));
        assert_eq!(&EisRat::one() * &x, x);
        // (ζ − 1)·ζ = ζ² − ζ = −1
        assert_eq!(&z(-1, 1) * &EisRat::zeta(), z(-1, 0));
        // sixth root of unity
        assert_eq!(EisRat::zeta().pow(6), EisRat::one());
        assert_eq!(EisRat::zeta().pow(3), z(-1, 0));
    }

    #[test]
    fn conjugation() {
        assert_eq!(EisRat::zeta().conj(), z(1, -1));
        assert_eq!(z(5, 0).conj(), z(5, 0));
        let w = z(-1, 1);
        assert_eq!(&w * &w.conj(), EisRat::one());
    }

    #[test]
    fn units() {
        assert!(z(-1, 1).is_unit());
        assert!(!z(2, 0).is_unit());
        assert!(!z(1, 1).is_unit());
        assert_eq!(z(1, 1).norm(), rat(3));
        let count = (-3..=3)
            .flat_map(|a| (-3..=3).map(move |b| z(a, b)))
            .filter(EisRat::is_unit)
            .count();
        assert_eq!(count, 6);
        assert!(!EisRat::new(ratio(1, 2), rat(0)).is_unit());
    }

    #[test]
    fn orders() {
        assert!(z(0, 2).in_order(Order::TwoZeta));
        assert!(!EisRat::zeta().in_order(Order::TwoZeta));
        assert!(z(-2, 2).in_order(Order::TwiceFull));
        assert!(!z(1, 2).in_order(Order::TwiceFull));
        assert!(!EisRat::new(ratio(1, 2), rat(0)).in_order(Order::Full));
    }

    #[test]
    fn re_im_decomposition() {
        // (2ζ)/√3 = 1/√3 + i
        let r = z(0, 2).over_sqrt3();
        assert_eq!(r.re_coeff, rat(1));
        assert_eq!(r.im, rat(1));
        assert_eq!(r.times_sqrt3(), z(0, 2));
    }

    #[test]
    fn display() {
        assert_eq!(z(-2, 2).to_string(), "-2 + 2ζ");
        assert_eq!(z(1, -1).to_string(), "1 - ζ");
        assert_eq!(z(0, -1).to_string(), "-ζ");
        assert_eq!(z(0, 0).to_string(), "0");
    }

    #[test]
    fn matrix_inverse() {
        let n = EisMatrix::from_ints([[(1, 0), (0, 1)], [(0, 0), (1, 0)]]);
        let ni = n.inverse().unwrap();
        assert_eq!(n.mul(&ni), EisMatrix::identity());
    }

    fn arb_eis() -> impl Strategy<Value = EisRat> {
        (-50i64..50, 1i64..9, -50i64..50, 1i64..9)
            .prop_map(|(a, da, b, db)| EisRat::new(ratio(a, da), ratio(b, db)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn ring_axioms(x in arb_eis(), y in arb_eis(), w in arb_eis()) {
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
            prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.over_sqrt3().times_sqrt3(), x.clone());
            if let Some(inv) = x.inverse() {
                prop_assert_eq!(&x * &inv, EisRat::one());
            }
        }

        #[test]
        fn machine_integers_agree(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000) {
            let p = EisInt::new(a, b).mul(EisInt::new(c, d));
            prop_assert_eq!(p.to_rat(), &z(a, b) * &z(c, d));
            prop_assert_eq!(rat(EisInt::new(a, b).norm()), z(a, b).norm());
        }
    }
}
