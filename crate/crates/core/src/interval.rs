//! Rational interval arithmetic and complex boxes.
//!
//! Intervals carry exact rational endpoints, so all containment and sign
//! statements are exact. The only place floating point enters is the final
//! conversion to logarithms, where the result is widened by a fixed slack
//! that dominates the f64 rounding error at desk magnitudes.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Int, Rat};

/// Closed interval with exact rational endpoints, `lo <= hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl std::fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN)
        )
    }
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(Int::from(2))
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign: `Some(1)`, `Some(-1)`, or `None` when straddling 0.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_negative() {
            RatInterval {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            RatInterval {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    pub fn square(&self) -> Self {
        if self.contains_zero() {
            let hi = (&self.lo * &self.lo).max(&self.hi * &self.hi);
            RatInterval {
                lo: Rat::zero(),
                hi,
            }
        } else {
            self.mul(self)
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RatInterval {
                lo: Rat::zero(),
                hi: (-self.lo.clone()).max(self.hi.clone()),
            }
        }
    }

    /// max(1, interval), used for Mahler-measure style products.
    pub fn max_with_one(&self) -> Self {
        let one = Rat::one();
        RatInterval {
            lo: self.lo.clone().max(one.clone()),
            hi: self.hi.clone().max(one),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Certified square root enclosure at about `bits` fractional bits;
    /// lower endpoint is clamped at 0.
    pub fn sqrt(&self, bits: u32) -> Self {
        assert!(
            !self.hi.is_negative(),
            "sqrt of a certifiably negative interval"
        );
        let lo = if self.lo.is_positive() {
            rat_sqrt_lower(&self.lo, bits)
        } else {
            Rat::zero()
        };
        let hi = rat_sqrt_upper(&self.hi, bits);
        RatInterval { lo, hi }
    }

    /// Natural log of the interval as widened f64 bounds; requires a
    /// certifiably positive interval.
    pub fn ln_f64(&self) -> (f64, f64) {
        assert!(self.lo.is_positive(), "log of non-positive interval");
        let (lo, _) = ln_rat_bounds(&self.lo);
        let (_, hi) = ln_rat_bounds(&self.hi);
        (lo, hi)
    }
}

/// Floor of sqrt(x) scaled: returns `r` with `r <= sqrt(x)`, accurate to
/// `2^-bits` relative.
fn rat_sqrt_lower(x: &Rat, bits: u32) -> Rat {
    debug_assert!(x.is_positive());
    let shift = 2 * bits as usize;
    // sqrt(p/q) = sqrt(p*q)/q
    let n = (x.numer() * x.denom()) << shift;
    let s = n.sqrt(); // floor
    Rat::new(s, x.denom() << bits)
}

fn rat_sqrt_upper(x: &Rat, bits: u32) -> Rat {
    if !x.is_positive() {
        return Rat::zero();
    }
    let shift = 2 * bits as usize;
    let n = (x.numer() * x.denom()) << shift;
    let s = n.sqrt() + Int::one(); // strict upper bound for non-squares, safe either way
    Rat::new(s, x.denom() << bits)
}

/// Additive slack applied to every f64 logarithm bound. The underlying
/// computation (52-bit mantissa + exact power-of-two exponent) has absolute
/// error well below 1e-12 at desk magnitudes.
pub const LOG_SLACK: f64 = 1e-9;

/// ln of a positive big integer as (lower, upper) f64 bounds.
pub fn ln_int_bounds(n: &Int) -> (f64, f64) {
    assert!(n.is_positive(), "log of non-positive integer");
    let bits = n.bits();
    if bits <= 52 {
        let v = n.to_f64().unwrap();
        let l = v.ln();
        return (l - LOG_SLACK, l + LOG_SLACK);
    }
    let shift = bits - 52;
    let m = (n >> shift).to_f64().unwrap();
    let lo = m.ln() + shift as f64 * std::f64::consts::LN_2;
    let hi = (m + 1.0).ln() + shift as f64 * std::f64::consts::LN_2;
    (lo - LOG_SLACK, hi + LOG_SLACK)
}

/// ln of a positive rational as (lower, upper) f64 bounds.
pub fn ln_rat_bounds(x: &Rat) -> (f64, f64) {
    assert!(x.is_positive(), "log of non-positive rational");
    let (nlo, nhi) = ln_int_bounds(x.numer());
    let (dlo, dhi) = ln_int_bounds(x.denom());
    (nlo - dhi, nhi - dlo)
}

/// Axis-aligned complex box with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: RatInterval,
    pub im: RatInterval,
}

impl ComplexBox {
    pub fn new(re: RatInterval, im: RatInterval) -> Self {
        ComplexBox { re, im }
    }

    pub fn point(re: Rat, im: Rat) -> Self {
        ComplexBox {
            re: RatInterval::point(re),
            im: RatInterval::point(im),
        }
    }

    pub fn real_point(re: Rat) -> Self {
        Self::point(re, Rat::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexBox {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexBox {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ComplexBox {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBox {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// |z|^2 as an exact interval.
    pub fn abs_square(&self) -> RatInterval {
        self.re.square().add(&self.im.square())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.re.is_disjoint(&other.re) || self.im.is_disjoint(&other.im)
    }

    pub fn max_width(&self) -> Rat {
        self.re.width().max(self.im.width())
    }

    /// Imaginary part certified strictly positive.
    pub fn im_positive(&self) -> bool {
        self.im.lo.is_positive()
    }

    /// Evaluate an integer polynomial on the box.
    pub fn eval_poly(&self, coeffs: &[Int]) -> ComplexBox {
        let mut acc = ComplexBox::point(Rat::zero(), Rat::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(self);
            acc.re = acc.re.add(&RatInterval::point(Rat::from_integer(c.clone())));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn interval_mul_signs() {
        let a = RatInterval::new(rat(-2), rat(3));
        let b = RatInterval::new(rat(-1), rat(4));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-8));
        assert_eq!(p.hi, rat(12));
    }

    #[test]
    fn sqrt_two_bounds() {
        let two = RatInterval::point(rat(2));
        let s = two.sqrt(40);
        assert!(s.lo.clone() * s.lo.clone() <= rat(2));
        assert!(s.hi.clone() * s.hi.clone() >= rat(2));
        assert!(s.width() < Rat::new(crate::int(1), crate::int(1) << 30));
    }

    #[test]
    fn ln_bounds_sandwich() {
        let (lo, hi) = ln_int_bounds(&crate::int(1000));
        let truth = 1000f64.ln();
        assert!(lo <= truth && truth <= hi);
        assert!(hi - lo < 1e-6);
        let big = crate::int(10).pow(50);
        let (lo, hi) = ln_int_bounds(&big);
        let truth = 50.0 * 10f64.ln();
        assert!(lo <= truth && truth <= hi);
    }

    #[test]
    fn complex_box_mul_contains_product() {
        // (1+2i)(3-i) = 5+5i
        let a = ComplexBox::point(rat(1), rat(2));
        let b = ComplexBox::point(rat(3), rat(-1));
        let p = a.mul(&b);
        assert!(p.re.contains(&rat(5)));
        assert!(p.im.contains(&rat(5)));
    }
}
