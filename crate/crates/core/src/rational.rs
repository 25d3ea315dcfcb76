//! Exact fractions and best rational approximation with bounded denominator.

use core::cmp::Ordering;

/// A reduced nonnegative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    /// Reduce `num/den` to lowest terms. `den` must be nonzero.
    pub fn new(num: u64, den: u64) -> Fraction {
        assert!(den != 0, "fraction denominator must be nonzero");
        let g = gcd(num, den).max(1);
        Fraction { num: num / g, den: den / g }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `|self - num/den|` as exact cross-multiplied parts `(diff, scale)`,
    /// meaning the distance is `diff / scale`.
    fn distance_to(&self, num: u64, den: u64) -> (u128, u128) {
        let lhs = self.num as u128 * den as u128;
        let rhs = num as u128 * self.den as u128;
        (lhs.abs_diff(rhs), self.den as u128 * den as u128)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl core::fmt::Display for Fraction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The fraction with denominator at most `max_den` closest to `num/den`,
/// via continued-fraction convergents and the final semiconvergent. Ties
/// resolve toward the smaller denominator.
pub fn best_rational_approximation(num: u64, den: u64, max_den: u64) -> Fraction {
    assert!(den != 0 && max_den >= 1);
    let target = Fraction::new(num, den);
    if target.den <= max_den {
        return target;
    }
    // Convergents p/q of the continued fraction of num/den.
    let (mut p_prev, mut q_prev) = (0u64, 1u64);
    let (mut p_cur, mut q_cur) = (1u64, 0u64);
    let (mut a, mut b) = (target.num, target.den);
    loop {
        let digit = a / b;
        let p_next = digit * p_cur + p_prev;
        let q_next = digit * q_cur + q_prev;
        if q_next > max_den {
            // Largest admissible semiconvergent against the last convergent.
            let t = (max_den - q_prev) / q_cur;
            let semi = Fraction::new(t * p_cur + p_prev, t * q_cur + q_prev);
            let conv = Fraction::new(p_cur, q_cur);
            let (ds, ss) = semi.distance_to(target.num, target.den);
            let (dc, sc) = conv.distance_to(target.num, target.den);
            // Compare ds/ss vs dc/sc exactly.
            return match (ds * sc).cmp(&(dc * ss)) {
                Ordering::Less => semi,
                Ordering::Greater => conv,
                Ordering::Equal => {
                    if semi.den < conv.den {
                        semi
                    } else {
                        conv
                    }
                }
            };
        }
        (p_prev, q_prev) = (p_cur, q_cur);
        (p_cur, q_cur) = (p_next, q_next);
        (a, b) = (b, a - digit * b);
        if b == 0 {
            return Fraction { num: p_cur, den: q_cur };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::fabs;
    use proptest::prelude::*;

    /// Exhaustive oracle: scan every denominator up to the bound.
    fn brute_best(num: u64, den: u64, max_den: u64) -> Fraction {
        let target = num as f64 / den as f64;
        let mut best = Fraction::new(0, 1);
        let mut best_err = f64::INFINITY;
        for q in 1..=max_den {
            let p = ((target * q as f64) + 0.5) as u64;
            for cand in [p.saturating_sub(1), p, p + 1] {
                let err = fabs(cand as f64 / q as f64 - target);
                let better = err < best_err - 1e-15
                    || (fabs(err - best_err) <= 1e-15 && q < best.den);
                if better {
                    best_err = err;
                    best = Fraction::new(cand, q);
                }
            }
        }
        best
    }

    #[test]
    fn exact_when_denominator_fits() {
        assert_eq!(best_rational_approximation(32, 96, 16), Fraction { num: 1, den: 3 });
        assert_eq!(best_rational_approximation(1, 2, 64), Fraction { num: 1, den: 2 });
    }

    #[test]
    fn golden_ratio_needs_fibonacci_denominators() {
        // φ - 1 = 0.6180...; with q <= 16 the best approximation is 8/13.
        let (num, den) = (618_033_988u64, 1_000_000_000u64);
        let approx = best_rational_approximation(num, den, 16);
        assert_eq!(approx, Fraction { num: 8, den: 13 });
        assert!(fabs(approx.value() - 0.618) > 1e-3);
    }

    #[test]
    fn fraction_ordering_is_by_value() {
        let mut v = [Fraction::new(2, 3), Fraction::new(1, 2), Fraction::new(3, 4)];
        v.sort();
        assert_eq!(v, [Fraction::new(1, 2), Fraction::new(2, 3), Fraction::new(3, 4)]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(num in 0u64..1000, den in 1u64..1000, max_den in 1u64..40) {
            let num = num % (den + 1); // keep targets in [0, 1]
            let fast = best_rational_approximation(num, den, max_den);
            let brute = brute_best(num, den, max_den);
            prop_assert!(fast.den <= max_den);
            // Both must sit at the same exact distance from the target;
            // compare |p/q - num/den| cross-multiplied to avoid rounding.
            let lhs = (fast.num as i128 * den as i128 - num as i128 * fast.den as i128)
                .unsigned_abs() * brute.den as u128;
            let rhs = (brute.num as i128 * den as i128 - num as i128 * brute.den as i128)
                .unsigned_abs() * fast.den as u128;
            prop_assert_eq!(lhs, rhs, "fast {} vs brute {}", fast, brute);
        }
    }
}
