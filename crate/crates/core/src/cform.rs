//! Exact polynomials in the irrational constant `c`.
//!
//! Every coordinate produced by the system is affine in `c` with rational
//! coefficients (the generators have constant linear parts and only the
//! `h`-map translates by `c`). Orientation tests and squared distances are
//! therefore quadratics in `c`. Keeping these symbolic means cancellations
//! are exact; only the final sign is decided against an enclosure of `c`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::interval::RationalInterval;
use crate::rational::Rational;

/// `a + b·c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CForm {
    pub a: Rational,
    pub b: Rational,
}

impl CForm {
    pub fn constant(a: Rational) -> Self {
        CForm {
            a,
            b: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// The constant `c` itself.
    pub fn c() -> Self {
        CForm {
            a: Rational::zero(),
            b: Rational::from_integer(1.into()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> CForm {
        CForm {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    pub fn to_quadratic(&self) -> Quadratic {
        Quadratic {
            coeffs: [self.a.clone(), self.b.clone(), Rational::zero()],
        }
    }

    pub fn enclose(&self, c: &RationalInterval) -> RationalInterval {
        c.scale(&self.b).shift(&self.a)
    }

    pub fn eval(&self, c: &Rational) -> Rational {
        &self.a + &self.b * c
    }
}

impl fmt::Display for CForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rational::from_integer(1.into());
        let c_term = if self.b == one {
            "c".to_string()
        } else {
            format!("{}·c", self.b)
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => f.write_str(&c_term),
            (false, false) => write!(f, "{} + {c_term}", self.a),
        }
    }
}

impl Add for &CForm {
    type Output = CForm;
    fn add(self, rhs: &CForm) -> CForm {
        CForm {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &CForm {
    type Output = CForm;
    fn sub(self, rhs: &CForm) -> CForm {
        CForm {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Neg for &CForm {
    type Output = CForm;
    fn neg(self) -> CForm {
        CForm {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Mul for &CForm {
    type Output = Quadratic;
    fn mul(self, rhs: &CForm) -> Quadratic {
        Quadratic {
            coeffs: [
                &self.a * &rhs.a,
                &self.a * &rhs.b + &self.b * &rhs.a,
                &self.b * &rhs.b,
            ],
        }
    }
}

/// `q0 + q1·c + q2·c²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratic {
    pub coeffs: [Rational; 3],
}

/// Sign of a value relative to a `c`-enclosure at one precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalSign {
    Negative,
    Zero,
    Positive,
    /// A root may lie inside the enclosure.
    Undecided,
}

impl Quadratic {
    pub fn constant(v: Rational) -> Self {
        Quadratic {
            coeffs: [v, Rational::zero(), Rational::zero()],
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let [q0, q1, q2] = &self.coeffs;
        q0 + x * (q1 + x * q2)
    }

    fn vertex(&self) -> Option<Rational> {
        let [_, q1, q2] = &self.coeffs;
        if q2.is_zero() {
            None
        } else {
            Some(-q1 / (q2 * Rational::from_integer(2.into())))
        }
    }

    /// Exact range over `x ∈ [lo, hi]`.
    pub fn enclose(&self, x: &RationalInterval) -> RationalInterval {
        let mut lo = self.eval(x.lo());
        let mut hi = lo.clone();
        let mut include = |v: Rational| {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        };
        include(self.eval(x.hi()));
        if let Some(v) = self.vertex() {
            if x.lo() < &v && &v < x.hi() {
                include(self.eval(&v));
            }
        }
        RationalInterval::new(lo, hi)
    }

    /// Sign over the enclosure `[t/3^p, (t+1)/3^p]` of `c`, by exact
    /// integer evaluation at the endpoints plus the vertex when it matters.
    pub fn sign_on(&self, level: &CLevel) -> LocalSign {
        if self.is_identically_zero() {
            return LocalSign::Zero;
        }
        let s_lo = self.sign_at_scaled(&level.t_lo, &level.scale);
        let s_hi = self.sign_at_scaled(&level.t_hi, &level.scale);
        if s_lo != s_hi || s_lo == 0 {
            return LocalSign::Undecided;
        }
        let q2 = &self.coeffs[2];
        let s = s_lo;
        let q2_sign = if q2.is_positive() {
            1
        } else if q2.is_negative() {
            -1
        } else {
            0
        };
        // A quadratic curving toward zero can cross it between two
        // same-signed endpoints; that needs the vertex.
        if q2_sign == s {
            if let Some(v) = self.vertex() {
                if level.interval.lo() < &v && &v < level.interval.hi() {
                    let at_vertex = self.eval(&v);
                    let sv = if at_vertex.is_positive() {
                        1
                    } else if at_vertex.is_negative() {
                        -1
                    } else {
                        0
                    };
                    if sv != s {
                        return LocalSign::Undecided;
                    }
                }
            }
        }
        if s > 0 {
            LocalSign::Positive
        } else {
            LocalSign::Negative
        }
    }

    /// Sign of `q(t/P)` computed as the sign of
    /// `n0·d1·d2·P² + n1·d0·d2·t·P + n2·d0·d1·t²`.
    fn sign_at_scaled(&self, t: &BigInt, p: &BigInt) -> i8 {
        let [q0, q1, q2] = &self.coeffs;
        let (n0, d0) = (q0.numer(), q0.denom());
        let (n1, d1) = (q1.numer(), q1.denom());
        let (n2, d2) = (q2.numer(), q2.denom());
        let mut acc = BigInt::zero();
        if !n0.is_zero() {
            acc += n0 * d1 * d2 * p * p;
        }
        if !n1.is_zero() {
            acc += n1 * d0 * d2 * t * p;
        }
        if !n2.is_zero() {
            acc += n2 * d0 * d1 * t * t;
        }
        if acc.is_positive() {
            1
        } else if acc.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl Add for &Quadratic {
    type Output = Quadratic;
    fn add(self, rhs: &Quadratic) -> Quadratic {
        Quadratic {
            coeffs: [
                &self.coeffs[0] + &rhs.coeffs[0],
                &self.coeffs[1] + &rhs.coeffs[1],
                &self.coeffs[2] + &rhs.coeffs[2],
            ],
        }
    }
}

impl Sub for &Quadratic {
    type Output = Quadratic;
    fn sub(self, rhs: &Quadratic) -> Quadratic {
        Quadratic {
            coeffs: [
                &self.coeffs[0] - &rhs.coeffs[0],
                &self.coeffs[1] - &rhs.coeffs[1],
                &self.coeffs[2] - &rhs.coeffs[2],
            ],
        }
    }
}

/// One precision level of the enclosure of `c`: `c ∈ [t_lo, t_hi] / scale`.
#[derive(Debug, Clone)]
pub struct CLevel {
    pub digits: usize,
    pub t_lo: BigInt,
    pub t_hi: BigInt,
    pub scale: BigInt,
    pub interval: RationalInterval,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, pow3};
    use crate::ternary::{truncation_numerator, DigitStream};
    use proptest::prelude::*;

    fn level(p: usize) -> CLevel {
        let d = DigitStream::canonical().c_digits(p).unwrap();
        let t = truncation_numerator(&d);
        let scale = pow3(p);
        CLevel {
            digits: p,
            interval: RationalInterval::new(
                Rational::new(t.clone(), scale.clone()),
                Rational::new(&t + 1, scale.clone()),
            ),
            t_hi: &t + 1,
            t_lo: t,
            scale,
        }
    }

    fn q(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Quadratic {
        Quadratic {
            coeffs: [frac(a.0, a.1), frac(b.0, b.1), frac(c.0, c.1)],
        }
    }

    #[test]
    fn affine_products_cancel_exactly() {
        let x = &CForm::c() - &CForm::constant(frac(1, 3));
        let y = CForm::constant(frac(2, 9));
        let cross = &(&x * &y) - &(&y * &x);
        assert!(cross.is_identically_zero());
        assert_eq!(cross.sign_on(&level(10)), LocalSign::Zero);
    }

    #[test]
    fn signs_near_c() {
        // c ≈ 0.46956; 1 − 2c ≈ 0.0609 > 0, c − 1/2 < 0
        let lv = level(40);
        assert_eq!(q((1, 1), (-2, 1), (0, 1)).sign_on(&lv), LocalSign::Positive);
        assert_eq!(q((-1, 2), (1, 1), (0, 1)).sign_on(&lv), LocalSign::Negative);
        // (c − 47/100)² − 1/10^8 has its minimum just to the right of c
        let near = q((47 * 47, 10_000), (-94, 100), (1, 1));
        let shifted = &near - &Quadratic::constant(frac(1, 100_000_000));
        assert_eq!(shifted.sign_on(&lv), LocalSign::Positive);
    }

    #[test]
    fn vertex_inside_enclosure_is_undecided() {
        // (x − m)² − ε with m at the midpoint of a coarse enclosure and tiny ε
        let lv = level(3);
        let m = lv.interval.midpoint();
        let eps = frac(1, 1_000_000);
        let poly = Quadratic {
            coeffs: [&m * &m - eps, -&m * frac(2, 1), frac(1, 1)],
        };
        assert_eq!(poly.sign_on(&lv), LocalSign::Undecided);
    }

    proptest! {
        #[test]
        fn decided_sign_agrees_with_range(a in -200i64..200, b in -200i64..200, c in -200i64..200,
                                         p in 2usize..12) {
            let poly = q((a, 50), (b, 50), (c, 50));
            let lv = level(p);
            let range = poly.enclose(&lv.interval);
            match poly.sign_on(&lv) {
                LocalSign::Positive => prop_assert!(range.is_positive()),
                LocalSign::Negative => prop_assert!(range.is_negative()),
                LocalSign::Zero => prop_assert!(poly.is_identically_zero()),
                LocalSign::Undecided => prop_assert!(!range.is_positive() && !range.is_negative()),
            }
        }
    }
}
