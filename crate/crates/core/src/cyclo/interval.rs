//! Outward-rounded fixed-point interval arithmetic.
//!
//! A value at precision `p` is a pair of integers `[lo, hi]` standing for the
//! real interval `[lo * 2^-p, hi * 2^-p]`. Every operation rounds `lo` down and
//! `hi` up, so the true value is always enclosed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub(crate) struct Interval {
    lo: BigInt,
    hi: BigInt,
}

fn div_floor(a: &BigInt, d: &BigInt) -> BigInt {
    a.div_floor(d)
}

fn div_ceil(a: &BigInt, d: &BigInt) -> BigInt {
    -((-a).div_floor(d))
}

/// Fixed-point context for a single precision.
pub(crate) struct Fixed {
    scale: BigInt,
}

impl Fixed {
    pub fn new(bits: u32) -> Self {
        Fixed {
            scale: BigInt::one() << bits as usize,
        }
    }

    pub fn zero(&self) -> Interval {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        }
    }

    pub fn integer(&self, n: i64) -> Interval {
        let v = BigInt::from(n) * &self.scale;
        Interval { lo: v.clone(), hi: v }
    }

    /// Enclosure of `p / q` with `q > 0`.
    pub fn ratio(&self, p: &BigInt, q: &BigInt) -> Interval {
        debug_assert!(q.is_positive());
        let n = p * &self.scale;
        Interval {
            lo: div_floor(&n, q),
            hi: div_ceil(&n, q),
        }
    }

    pub fn add(&self, a: &Interval, b: &Interval) -> Interval {
        Interval {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
        }
    }

    pub fn sub(&self, a: &Interval, b: &Interval) -> Interval {
        Interval {
            lo: &a.lo - &b.hi,
            hi: &a.hi - &b.lo,
        }
    }

    pub fn neg(&self, a: &Interval) -> Interval {
        Interval {
            lo: -&a.hi,
            hi: -&a.lo,
        }
    }

    pub fn mul(&self, a: &Interval, b: &Interval) -> Interval {
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval {
            lo: div_floor(min, &self.scale),
            hi: div_ceil(max, &self.scale),
        }
    }

    pub fn scale_int(&self, a: &Interval, k: &BigInt) -> Interval {
        let x = &a.lo * k;
        let y = &a.hi * k;
        if k.is_negative() {
            Interval { lo: y, hi: x }
        } else {
            Interval { lo: x, hi: y }
        }
    }

    pub fn div_int(&self, a: &Interval, d: &BigInt) -> Interval {
        debug_assert!(d.is_positive());
        Interval {
            lo: div_floor(&a.lo, d),
            hi: div_ceil(&a.hi, d),
        }
    }

    pub fn scale_rational(&self, a: &Interval, q: &BigRational) -> Interval {
        self.div_int(&self.scale_int(a, q.numer()), q.denom())
    }

    /// Widen by `ulps` units in the last place on both sides.
    pub fn widen(&self, a: &Interval, ulps: i64) -> Interval {
        Interval {
            lo: &a.lo - ulps,
            hi: &a.hi + ulps,
        }
    }

    /// Enclosure of `atan(1/x)` for an integer `x >= 2`.
    fn atan_inv(&self, x: i64) -> Interval {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = x.clone();
        let mut acc = self.zero();
        let mut k: i64 = 0;
        loop {
            let den = &power * (2 * k + 1);
            if den > self.scale {
                // Alternating series: the tail is smaller than this term (< 1 ulp).
                return self.widen(&acc, 1);
            }
            let term = self.ratio(&BigInt::one(), &den);
            acc = if k % 2 == 0 {
                self.add(&acc, &term)
            } else {
                self.sub(&acc, &term)
            };
            power *= &x2;
            k += 1;
        }
    }

    /// Enclosure of pi by Machin's formula.
    pub fn pi(&self) -> Interval {
        let a = self.scale_int(&self.atan_inv(5), &BigInt::from(16));
        let b = self.scale_int(&self.atan_inv(239), &BigInt::from(4));
        self.sub(&a, &b)
    }

    /// Taylor series for cos (`odd = false`) or sin (`odd = true`) on `0 <= x < 1`.
    fn taylor(&self, x: &Interval, odd: bool) -> Interval {
        let x2 = self.mul(x, x);
        let mut term = if odd { x.clone() } else { self.integer(1) };
        let mut acc = term.clone();
        let mut n: i64 = if odd { 1 } else { 0 };
        let mut negative = false;
        loop {
            term = self.div_int(&self.mul(&term, &x2), &BigInt::from((n + 1) * (n + 2)));
            n += 2;
            negative = !negative;
            let magnitude = term.hi.abs().max(term.lo.abs());
            if magnitude <= BigInt::one() {
                return self.widen(&acc, 2);
            }
            acc = if negative {
                self.sub(&acc, &term)
            } else {
                self.add(&acc, &term)
            };
        }
    }

    /// Enclosure of `cos(2 pi t)` for a rational `t` in `[0, 1)`.
    pub fn cos_two_pi(&self, pi: &Interval, t: &BigRational) -> Interval {
        let one = BigRational::one();
        let half = BigRational::new(1.into(), 2.into());
        let quarter = BigRational::new(1.into(), 4.into());
        let eighth = BigRational::new(1.into(), 8.into());

        let mut t = t.clone();
        if t > half {
            t = &one - &t;
        }
        let mut flip = false;
        if t > quarter {
            t = &half - &t;
            flip = true;
        }
        let (angle, odd) = if t > eighth {
            (&quarter - &t, true)
        } else {
            (t, false)
        };
        let x = self.scale_rational(pi, &(angle * BigRational::from_integer(2.into())));
        let v = self.taylor(&x, odd);
        if flip {
            self.neg(&v)
        } else {
            v
        }
    }
}

impl Interval {
    /// `Some(sign)` when the interval excludes zero.
    pub fn strict_sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    #[cfg(test)]
    pub fn to_f64_bounds(&self, bits: u32) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let s = 2f64.powi(bits as i32);
        (self.lo.to_f64().unwrap() / s, self.hi.to_f64().unwrap() / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_is_enclosed() {
        for bits in [64, 128, 256] {
            let f = Fixed::new(bits);
            let (lo, hi) = f.pi().to_f64_bounds(bits);
            assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi + 1e-15);
            assert!(hi - lo < 1e-15);
        }
    }

    #[test]
    fn cosines_are_enclosed() {
        let bits = 80;
        let f = Fixed::new(bits);
        let pi = f.pi();
        for q in 1..40i64 {
            for p in 0..q {
                let t = BigRational::new(p.into(), q.into());
                let (lo, hi) = f.cos_two_pi(&pi, &t).to_f64_bounds(bits);
                let exact = (2.0 * std::f64::consts::PI * p as f64 / q as f64).cos();
                assert!(lo - 1e-13 <= exact && exact <= hi + 1e-13, "{p}/{q}: {lo} {exact} {hi}");
                assert!(hi - lo < 1e-18);
            }
        }
    }
}
