//! Exact rational versions of the polynomial coefficients. Every coefficient
//! is rational in `q` and `Q = q^(2alpha+1)`, so with both taken as the exact
//! values of their `f64` representations the algebraic identities hold with
//! zero error. Used as an oracle for identities whose `f64` evaluation cancels
//! catastrophically.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QError, Result};
use crate::qcore::QContext;

#[derive(Debug, Clone)]
pub struct ExactHermite {
    q: BigRational,
    qa: BigRational,
}

pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| QError::Domain(format!("{x} is not finite")))
}

/// Nearest `f64`, also for numerators and denominators beyond the `f64` range.
pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    // bring the quotient near 1 before dividing
    let (n, d) = if shift > 0 {
        (n.clone(), d.clone() << (shift as u64))
    } else {
        (n.clone() << ((-shift) as u64), d.clone())
    };
    let mant = BigRational::new(n, d).to_f64().unwrap_or(f64::NAN);
    mant * 2f64.powi(shift as i32)
}

impl ExactHermite {
    pub fn new(ctx: &QContext) -> Result<Self> {
        Ok(ExactHermite {
            q: rational(ctx.q())?,
            qa: rational(ctx.q_two_alpha_one())?,
        })
    }

    fn qpow(&self, e: i64) -> BigRational {
        let p = num_traits::pow(self.q.clone(), e.unsigned_abs() as usize);
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// `q^(e_k)`: `q^k` for even `k`, `q^k Q` for odd.
    fn gen_pow(&self, k: usize) -> BigRational {
        if k % 2 == 0 {
            self.qpow(k as i64)
        } else {
            self.qpow(k as i64) * &self.qa
        }
    }

    /// `(q;q)_{n,alpha}`
    pub fn gen_shifted(&self, n: usize) -> BigRational {
        (1..=n).fold(BigRational::one(), |acc, k| {
            acc * (BigRational::one() - self.gen_pow(k))
        })
    }

    /// `(q^step; q^step)_n`
    fn pochhammer(&self, step: i64, n: usize) -> BigRational {
        (1..=n as i64).fold(BigRational::one(), |acc, k| {
            acc * (BigRational::one() - self.qpow(step * k))
        })
    }

    /// Coefficients of `h_n`; entry `k` multiplies `x^(n-2k)`.
    pub fn htilde_coefficients(&self, n: usize) -> Vec<BigRational> {
        let top = self.pochhammer(1, n);
        (0..=n / 2)
            .map(|k| {
                let (ni, ki) = (n as i64, k as i64);
                let c = &top * self.qpow(-2 * ni * ki + ki * (2 * ki + 1))
                    / (self.pochhammer(2, k) * self.gen_shifted(n - 2 * k));
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    /// Inversion coefficients `c_k` with `x^n = sum_k c_k h_(n-2k)(x)`.
    pub fn monomial_coefficients(&self, n: usize) -> Vec<BigRational> {
        let top = self.gen_shifted(n);
        (0..=n / 2)
            .map(|k| {
                let (ni, ki) = (n as i64, k as i64);
                &top * self.qpow(-2 * ni * ki + 3 * ki * ki)
                    / (self.pochhammer(2, k) * self.pochhammer(1, n - 2 * k))
            })
            .collect()
    }

    pub fn eval_htilde(&self, n: usize, x: &BigRational) -> BigRational {
        self.htilde_coefficients(n)
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (k, c)| {
                acc + c * num_traits::pow(x.clone(), n - 2 * k)
            })
    }

    /// `sum_k c_k h_(n-2k)(x) - x^n`, exactly.
    pub fn inversion_residual(&self, n: usize, x: &BigRational) -> BigRational {
        let sum = self
            .monomial_coefficients(n)
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (k, c)| {
                acc + c * self.eval_htilde(n - 2 * k, x)
            });
        sum - num_traits::pow(x.clone(), n)
    }
}

/// `|a - b| / |b|` with `b` exact.
pub fn relative_error(a: f64, b: &BigRational) -> Result<f64> {
    let diff = rational(a)? - b;
    if b.is_zero() {
        return Ok(to_f64(&diff.abs()));
    }
    Ok(to_f64(&(diff / b).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::HermiteFamily;
    use num_bigint::BigInt;

    #[test]
    fn conversion_round_trips() {
        for &x in &[0.0, 1.0, -3.25, 1e-300, 7.5e290, 0.1] {
            assert_eq!(to_f64(&rational(x).unwrap()), x);
        }
        let big = BigRational::new(BigInt::from(1) << 2000u32, BigInt::from(3) << 1990u32);
        assert!((to_f64(&big) - 1024.0 / 3.0).abs() < 1e-12);
        assert!(rational(f64::NAN).is_err());
    }

    #[test]
    fn float_coefficients_match_exact() {
        let ctx = QContext::new(0.5, 0.3).unwrap();
        let fam = HermiteFamily::new(ctx, 10).unwrap();
        let ex = ExactHermite::new(&ctx).unwrap();
        for n in 0..=10 {
            for (a, b) in fam
                .monomial_expand(n)
                .unwrap()
                .iter()
                .zip(ex.monomial_coefficients(n))
            {
                assert!(relative_error(*a, &b).unwrap() < 1e-13);
            }
            let x = rational(0.375).unwrap();
            let h = fam.eval_htilde(n, 0.375).unwrap();
            let scale = fam.eval_htilde_magnitude(n, 0.375).unwrap();
            let err = to_f64(&(rational(h).unwrap() - ex.eval_htilde(n, &x)).abs());
            assert!(err < 1e-14 * scale, "n={n}");
        }
    }

    #[test]
    fn inversion_is_exact() {
        let ctx = QContext::new(0.7, -0.2).unwrap();
        let ex = ExactHermite::new(&ctx).unwrap();
        for n in 0..=8 {
            for &x in &[0.7, -1.3, 2.0] {
                assert!(
                    ex.inversion_residual(n, &rational(x).unwrap()).is_zero(),
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn alpha_minus_half_exact_matches_standard_sum() {
        let ctx = QContext::new(0.5, -0.5).unwrap();
        let ex = ExactHermite::new(&ctx).unwrap();
        let q = rational(0.5).unwrap();
        let std_shifted = |n: usize| {
            (1..=n).fold(BigRational::one(), |acc, k| {
                acc * (BigRational::one() - num_traits::pow(q.clone(), k))
            })
        };
        for n in 0..=10 {
            assert_eq!(ex.gen_shifted(n), std_shifted(n));
        }
    }
}
