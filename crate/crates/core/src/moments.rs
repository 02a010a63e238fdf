//! Exact moment sequence of the measure.
//!
//! The even moments are `m_{2k} = P_k(1)` where the polynomials `P_n` obey
//!
//! ```text
//! P_0(s) = 1,
//! P_{n+1}(s) = sum_{m=0}^{n} ( int_0^s P_m(t) dt + 2^{-m} C_m (1-s)^{m+1} ) P_{n-m}(s),
//! ```
//!
//! with `C_m` the Catalan numbers. Everything here is exact rational
//! arithmetic: the recursion mixes `2^{-m}` factors with polynomial
//! integration, and float drift would poison the downstream cross-checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar; always reduced, denominator positive.
pub type Rational = BigRational;

/// Catalan numbers `C_0..=C_n` by the convolution recurrence
/// `C_{k+1} = sum_{j=0}^{k} C_j C_{k-j}`.
pub fn catalan_table(n: usize) -> Vec<BigInt> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(BigInt::one());
    for k in 0..n {
        let next: BigInt = (0..=k).map(|j| &table[j] * &table[k - j]).sum();
        table.push(next);
    }
    table
}

/// The n-th Catalan number.
pub fn catalan(n: usize) -> BigInt {
    catalan_table(n).pop().expect("table is never empty")
}

/// Polynomial in one variable with exact rational coefficients.
///
/// `coeffs[k]` multiplies `s^k`; the trailing coefficient is nonzero unless
/// the polynomial is zero (empty coefficient list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RationalPoly {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact value at `s = 1`, i.e. the coefficient sum.
    pub fn eval_one(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> RationalPoly {
        if self.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rational::from_integer(BigInt::from(k as u64 + 1)));
        }
        RationalPoly::from_coeffs(coeffs)
    }

    fn add(&self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            let b = rhs.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            coeffs.push(a + b);
        }
        RationalPoly::from_coeffs(coeffs)
    }

    /// Schoolbook product; degrees stay small enough that nothing fancier pays off.
    fn mul(&self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }

}

impl std::ops::Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        RationalPoly::add(self, rhs)
    }
}

impl std::ops::Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        RationalPoly::mul(self, rhs)
    }
}

/// Integer polynomial over a single positive denominator. The recursion
/// runs on this representation so that products are plain integer
/// convolutions; one content reduction per polynomial keeps sizes down.
#[derive(Debug, Clone)]
struct ScaledPoly {
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl ScaledPoly {
    fn one() -> Self {
        ScaledPoly {
            coeffs: vec![BigInt::one()],
            den: BigInt::one(),
        }
    }

    fn reduce(mut self) -> Self {
        let mut g = self.den.clone();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
            if g.is_one() {
                return self;
            }
        }
        for c in &mut self.coeffs {
            *c /= &g;
        }
        self.den /= &g;
        self
    }

    fn antiderivative(&self) -> ScaledPoly {
        let mut scale = BigInt::one();
        for k in 1..=self.coeffs.len() {
            scale = num_integer::Integer::lcm(&scale, &BigInt::from(k as u64));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::ZERO);
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c * (&scale / BigInt::from(k as u64 + 1)));
        }
        ScaledPoly {
            coeffs,
            den: &self.den * &scale,
        }
    }

    fn add(&self, rhs: &ScaledPoly) -> ScaledPoly {
        let g = num_integer::Integer::gcd(&self.den, &rhs.den);
        let la = &rhs.den / &g;
        let lb = &self.den / &g;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).map(|c| c * &la).unwrap_or_else(|| BigInt::ZERO);
            let b = rhs.coeffs.get(k).map(|c| c * &lb).unwrap_or_else(|| BigInt::ZERO);
            coeffs.push(a + b);
        }
        ScaledPoly {
            coeffs,
            den: &self.den * &la,
        }
    }

    fn mul(&self, rhs: &ScaledPoly) -> ScaledPoly {
        let mut coeffs = vec![BigInt::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ScaledPoly {
            coeffs,
            den: &self.den * &rhs.den,
        }
    }

    fn to_rational(&self) -> RationalPoly {
        RationalPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| Rational::new(c.clone(), self.den.clone()))
                .collect(),
        )
    }
}

/// The polynomials `P_0..=P_n` of the recursion, computed exactly.
pub fn p_polynomials(n: usize) -> Vec<RationalPoly> {
    let catalans = catalan_table(n);
    let mut ps = vec![ScaledPoly::one()];
    // bracket_m = int_0^s P_m + 2^{-m} C_m (1-s)^{m+1}; independent of the
    // recursion level, so each one is built exactly once
    let mut brackets: Vec<ScaledPoly> = Vec::new();
    let mut one_minus_pow = ScaledPoly::one();
    let lin = ScaledPoly {
        coeffs: vec![BigInt::one(), -BigInt::one()],
        den: BigInt::one(),
    };
    for next in 1..=n {
        let m = next - 1;
        one_minus_pow = one_minus_pow.mul(&lin);
        let weighted = ScaledPoly {
            coeffs: one_minus_pow.coeffs.iter().map(|c| c * &catalans[m]).collect(),
            den: &one_minus_pow.den * (BigInt::one() << m),
        };
        brackets.push(ps[m].antiderivative().add(&weighted).reduce());

        let mut acc = brackets[0].mul(&ps[next - 1]);
        for k in 1..=next - 1 {
            acc = acc.add(&brackets[k].mul(&ps[next - 1 - k]));
        }
        ps.push(acc.reduce());
    }
    ps.iter().map(ScaledPoly::to_rational).collect()
}

/// Exact moments `m_0..=m_N`; every odd moment is zero.
#[derive(Debug, Clone)]
pub struct MomentTable {
    values: Vec<Rational>,
}

impl MomentTable {
    pub fn new(max_order: usize) -> Self {
        let ps = p_polynomials(max_order / 2);
        let values = (0..=max_order)
            .map(|n| {
                if n % 2 == 0 {
                    ps[n / 2].eval_one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        MomentTable { values }
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.values.iter().enumerate()
    }

    /// Partial sum of the moment generating series at `x`, lowest degree
    /// first, each term converted to floating point on its own.
    pub fn mgf_partial(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for m in &self.values {
            acc += m.to_f64().expect("moment fits in f64") * pow;
            pow *= x;
        }
        acc
    }
}

/// Moments `m_0..=m_N` as exact rationals.
pub fn moments(max_order: usize) -> MomentTable {
    MomentTable::new(max_order)
}

/// `sum_{n=0}^{N} m_n x^n` in floating point.
pub fn mgf_partial(x: f64, max_order: usize) -> f64 {
    moments(max_order).mgf_partial(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent Catalan oracle: C_n = binom(2n, n) / (n + 1).
    fn catalan_binomial(n: usize) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for k in 0..n {
            num *= BigInt::from((2 * n - k) as u64);
            den *= BigInt::from((k + 1) as u64);
        }
        num / den / BigInt::from(n as u64 + 1)
    }

    #[test]
    fn catalan_base_cases_and_known_values() {
        assert_eq!(catalan(0), BigInt::from(1));
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(catalan(10), BigInt::from(16796));
    }

    #[test]
    fn catalan_matches_binomial_oracle() {
        let table = catalan_table(30);
        for (n, c) in table.iter().enumerate() {
            assert_eq!(*c, catalan_binomial(n), "C_{n}");
        }
    }

    #[test]
    fn first_polynomials_hand_unrolled() {
        let ps = p_polynomials(2);
        assert_eq!(ps[0], RationalPoly::one());
        // m = 0 term of the recursion: (s + (1-s)) * P_0 = 1
        assert_eq!(ps[1], RationalPoly::one());
        // P_2(s) = 3/2 + s^2/2
        assert_eq!(
            ps[2],
            RationalPoly::from_coeffs(vec![rat(3, 2), rat(0, 1), rat(1, 2)])
        );
        assert_eq!(ps[2].eval_one(), rat(2, 1));
    }

    #[test]
    fn low_moments_exact() {
        let table = moments(12);
        assert_eq!(*table.get(0), rat(1, 1));
        assert_eq!(*table.get(2), rat(1, 1));
        assert_eq!(*table.get(4), rat(2, 1));
        assert_eq!(*table.get(6), rat(14, 3));
        assert_eq!(*table.get(7), rat(0, 1));
        for n in (1..=11).step_by(2) {
            assert!(table.get(n).is_zero(), "m_{n} must vanish");
        }
    }

    /// Value-level recursion at s = 1: the `(1-s)^{m+1}` term vanishes there,
    /// so `P_{n+1}(1) = sum_m (int_0^1 P_m) P_{n-m}(1)`. Running the moments
    /// through this second route must reproduce the expanded-polynomial route.
    #[test]
    fn symbolic_and_value_recursion_agree() {
        let n = 12;
        let ps = p_polynomials(n);
        let integrals: Vec<Rational> = ps.iter().map(|p| p.antiderivative().eval_one()).collect();
        let mut at_one = vec![Rational::one()];
        for next in 1..=n {
            let prev = next - 1;
            let v: Rational = (0..=prev)
                .map(|m| &integrals[m] * &at_one[prev - m])
                .sum();
            at_one.push(v);
        }
        let table = moments(2 * n);
        for (k, v) in at_one.iter().enumerate() {
            assert_eq!(table.get(2 * k), v, "m_{}", 2 * k);
        }
    }

    #[test]
    fn even_moments_dominated_by_catalan() {
        let table = moments(80);
        let cats = catalan_table(40);
        for (k, cat) in cats.iter().enumerate() {
            let m = table.get(2 * k);
            assert!(!m.is_negative(), "m_{} >= 0", 2 * k);
            assert!(
                *m <= Rational::from_integer(cat.clone()),
                "m_{} <= C_{k}",
                2 * k
            );
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn polynomials_bounded_by_catalan_on_unit_interval() {
        let ps = p_polynomials(20);
        let cats = catalan_table(20);
        for (n, p) in ps.iter().enumerate() {
            let bound = Rational::from_integer(cats[n].clone());
            for j in 0..=100u64 {
                let x = Rational::new(BigInt::from(j), BigInt::from(100));
                let v = p.eval(&x);
                assert!(v.abs() <= bound, "|P_{n}({j}/100)| <= C_{n}");
            }
        }
    }

    /// Jacobi eigenvalue sweep for small symmetric matrices; test-only.
    #[allow(clippy::needless_range_loop)]
    fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _ in 0..200 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-28 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[i][i]).collect()
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn hankel_matrices_positive_semidefinite() {
        let table = moments(16);
        for k in 0..=8usize {
            let mut h = vec![vec![0.0; k + 1]; k + 1];
            let mut max_entry: f64 = 0.0;
            for i in 0..=k {
                for j in 0..=k {
                    let v = table.get(i + j).to_f64().unwrap();
                    h[i][j] = v;
                    max_entry = max_entry.max(v.abs());
                }
            }
            for row in &mut h {
                for v in row.iter_mut() {
                    *v /= max_entry;
                }
            }
            let eigs = symmetric_eigenvalues(h);
            let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-9, "Hankel order {k}: min eigenvalue {min}");
        }
    }

    #[test]
    fn mgf_partial_degenerate_cases() {
        assert_eq!(mgf_partial(0.0, 40), 1.0);
        assert_eq!(mgf_partial(0.3, 0), 1.0);
    }
}
