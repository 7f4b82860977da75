//! The Ehrenfest chain `p_x = 1 - x/N` on `0..=N` and its exact closed forms.
//!
//! Eigenvalues are `1 - 2m/N` with Krawtchouk eigenvectors
//! `K_m^(N)(x) = sum_j (-1)^j C(N-x, m-j) C(x, j)`. For the walk with
//! `nu1 = 1, nu2 = -1` started at `|0,R>` the time average is
//!
//! ```text
//! pbar(x) = C(N,x)/4^N [ 1 + C(2N-2x,N-x) C(2x,x) / (2 C(N,x))
//!                          + 1/2 sum_{m=1}^{N-1} x(N-x)/(4m(N-m)) (4 K_{m-1}^(N-2)(x-1))^2 ]
//! ```
//!
//! The last sum is empty at `x = 0` and `x = N`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chain::BirthDeathChain;
use crate::distribution::{Distribution, Provenance};
use crate::{Error, Result};

/// Largest `N` evaluated in exact rationals.
pub const EXACT_LIMIT: usize = 64;
/// Largest `N` accepted by the floating-point path.
pub const FLOAT_LIMIT: usize = 2000;

/// Ehrenfest chain with `N` balls; `n = N - 1` interior vertices.
pub fn ehrenfest_chain(big_n: usize) -> Result<BirthDeathChain> {
    if big_n < 2 {
        return Err(Error::OutOfRange(format!("Ehrenfest chain needs N >= 2, got {big_n}")));
    }
    let p = (0..=big_n).map(|x| 1.0 - x as f64 / big_n as f64).collect();
    BirthDeathChain::new(p)
}

/// `C(a, b)` with `C(a, b) = 0` for `b < 0` or `b > a`.
fn choose(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    binomial(BigInt::from(a), BigInt::from(b))
}

/// `K_m^(N)(x)`, zero for `m` outside `0..=N`.
fn krawtchouk_ext(big_n: i64, m: i64, x: i64) -> BigInt {
    if m < 0 || m > big_n {
        return BigInt::zero();
    }
    let mut sum = BigInt::zero();
    for j in 0..=m {
        let term = choose(big_n - x, m - j) * choose(x, j);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `K_m^(N)(x)` for `0 <= m, x <= N`.
pub fn krawtchouk(big_n: usize, m: usize, x: usize) -> Result<BigInt> {
    if m > big_n || x > big_n {
        return Err(Error::OutOfRange(format!(
            "Krawtchouk index (m={m}, x={x}) outside 0..={big_n}"
        )));
    }
    Ok(krawtchouk_ext(big_n as i64, m as i64, x as i64))
}

/// All `K_m^(N)(x)`, `values[m][x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrawtchoukTable {
    big_n: usize,
    values: Vec<Vec<BigInt>>,
}

impl KrawtchoukTable {
    pub fn new(big_n: usize) -> Self {
        let n = big_n as i64;
        let values = (0..=n)
            .map(|m| (0..=n).map(|x| krawtchouk_ext(n, m, x)).collect())
            .collect();
        KrawtchoukTable { big_n, values }
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn get(&self, m: usize, x: usize) -> &BigInt {
        &self.values[m][x]
    }

    /// `K_m(x)` with zero outside `0..=N` in `m`; `x` must be in range.
    fn at(&self, m: i64, x: usize) -> BigInt {
        if m < 0 || m > self.big_n as i64 {
            BigInt::zero()
        } else {
            self.values[m as usize][x].clone()
        }
    }
}

/// Outcome of the exact identity checks.
#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

/// The five neighbor identities between `K^(N-2)`, `K^(N-1)`, `K^(N)`,
/// `K^(N+1)` and the squared-sum identity at size `N`. Requires `N >= 2`.
pub fn verify_identities(big_n: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    if big_n < 2 {
        report.violations.push(format!("identities need N >= 2, got {big_n}"));
        return report;
    }
    let lower2 = KrawtchoukTable::new(big_n - 2);
    let lower = KrawtchoukTable::new(big_n - 1);
    let table = KrawtchoukTable::new(big_n);
    let upper = KrawtchoukTable::new(big_n + 1);
    let n = big_n as i64;

    for m in 0..=n + 1 {
        for x in 0..=big_n {
            let lhs = table.at(m - 1, x) + table.at(m, x);
            report.check(lhs == upper.at(m, x), || {
                format!("K_(m-1)^(N) + K_m^(N) != K_m^(N+1) at N={big_n}, m={m}, x={x}")
            });
            let lhs = table.at(m, x) - table.at(m - 1, x);
            report.check(lhs == upper.at(m, x + 1), || {
                format!("K_m^(N) - K_(m-1)^(N) != K_m^(N+1)(x+1) at N={big_n}, m={m}, x={x}")
            });
        }
    }
    let two = BigInt::from(2);
    let four = BigInt::from(4);
    for m in 0..=n {
        for x in 0..big_n {
            let lhs = table.at(m, x) + table.at(m, x + 1);
            report.check(lhs == &two * lower.at(m, x), || {
                format!("K_m(x) + K_m(x+1) != 2 K_m^(N-1)(x) at N={big_n}, m={m}, x={x}")
            });
            let lhs = table.at(m, x) - table.at(m, x + 1);
            report.check(lhs == &two * lower.at(m - 1, x), || {
                format!("K_m(x) - K_m(x+1) != 2 K_(m-1)^(N-1)(x) at N={big_n}, m={m}, x={x}")
            });
        }
        for x in 1..big_n {
            let lhs = table.at(m, x - 1) - table.at(m, x + 1);
            report.check(lhs == &four * lower2.at(m - 1, x - 1), || {
                format!("K_m(x-1) - K_m(x+1) != 4 K_(m-1)^(N-2)(x-1) at N={big_n}, m={m}, x={x}")
            });
        }
    }
    for x in 0..=big_n {
        let xi = x as i64;
        let sum: BigInt = (0..=n).map(|m| table.at(m, x).pow(2)).sum();
        let rhs = choose(2 * n - 2 * xi, n - xi) * choose(2 * xi, xi);
        report.check(sum * choose(n, xi) == rhs, || {
            format!("squared-sum identity fails at N={big_n}, x={x}")
        });
    }
    report
}

fn check_exact_range(big_n: usize, x: Option<usize>) -> Result<()> {
    if !(2..=EXACT_LIMIT).contains(&big_n) {
        return Err(Error::OutOfRange(format!(
            "exact evaluation needs 2 <= N <= {EXACT_LIMIT}, got {big_n}"
        )));
    }
    if let Some(x) = x {
        if x > big_n {
            return Err(Error::OutOfRange(format!("x = {x} outside 0..={big_n}")));
        }
    }
    Ok(())
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `C(2N-2x, N-x) C(2x, x) / 2^(2N+1)`.
pub fn arcsine_component(big_n: usize, x: usize) -> Result<BigRational> {
    check_exact_range(big_n, Some(x))?;
    let (n, xi) = (big_n as i64, x as i64);
    Ok(ratio(
        choose(2 * n - 2 * xi, n - xi) * choose(2 * xi, xi),
        BigInt::one() << (2 * big_n + 1),
    ))
}

/// The closed-form time average in exact rationals, `2 <= N <= 64`.
pub fn ehrenfest_time_average_exact(big_n: usize) -> Result<Vec<BigRational>> {
    check_exact_range(big_n, None)?;
    let n = big_n as i64;
    let lower2 = KrawtchoukTable::new(big_n - 2);
    let four_n = BigInt::one() << (2 * big_n);
    Ok((0..=big_n)
        .map(|x| {
            let xi = x as i64;
            let cnx = choose(n, xi);
            let mut bracket = BigRational::one();
            bracket += ratio(
                choose(2 * n - 2 * xi, n - xi) * choose(2 * xi, xi),
                BigInt::from(2) * &cnx,
            );
            if x > 0 && x < big_n {
                for m in 1..n {
                    let k = BigInt::from(4) * lower2.at(m - 1, x - 1);
                    let weight = ratio(
                        BigInt::from(xi * (n - xi)) * &k * &k,
                        BigInt::from(8 * m * (n - m)),
                    );
                    bracket += weight;
                }
            }
            bracket * ratio(cnx, four_n.clone())
        })
        .collect())
}

/// Nearest `f64`, also when numerator and denominator overflow separately.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // both parts may overflow f64 separately
        let shift = r.denom().bits().max(r.numer().abs().bits()).saturating_sub(900);
        let num = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

fn ln_choose(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Orthonormal Krawtchouk matrix `s[m][x] = sqrt(pi(x)) K_m(x) / sqrt(C(N,m))`
/// from the three-term recurrence in `m`.
fn orthonormal_krawtchouk(big_n: usize) -> Vec<Vec<f64>> {
    let nf = big_n as f64;
    let base: Vec<f64> = (0..=big_n)
        .map(|x| (0.5 * (ln_choose(big_n, x) - nf * std::f64::consts::LN_2)).exp())
        .collect();
    let mut s = vec![base.clone()];
    if big_n == 0 {
        return s;
    }
    s.push(
        (0..=big_n)
            .map(|x| (nf - 2.0 * x as f64) / nf.sqrt() * base[x])
            .collect(),
    );
    // forward recursion is stable up to N/2; K_(N-m)(x) = (-1)^x K_m(x) covers the rest
    let half = big_n / 2;
    for m in 1..half {
        let mf = m as f64;
        let a = ((mf + 1.0) * (nf - mf)).sqrt();
        let b = (mf * (nf - mf + 1.0)).sqrt();
        let next = (0..=big_n)
            .map(|x| ((nf - 2.0 * x as f64) * s[m][x] - b * s[m - 1][x]) / a)
            .collect();
        s.push(next);
    }
    for m in s.len()..=big_n {
        let mirror = s[big_n - m]
            .iter()
            .enumerate()
            .map(|(x, v)| if x % 2 == 0 { *v } else { -v })
            .collect();
        s.push(mirror);
    }
    s
}

/// The time average as floats: exact rationals for `N <= 64`, otherwise the
/// orthonormal recurrence (`N <= 2000`).
pub fn ehrenfest_time_average(big_n: usize) -> Result<Distribution> {
    if big_n <= EXACT_LIMIT {
        let exact = ehrenfest_time_average_exact(big_n)?;
        return Distribution::new(exact.iter().map(rational_to_f64).collect(), Provenance::Ehrenfest);
    }
    ehrenfest_time_average_float(big_n)
}

/// Floating-point evaluation for `2 <= N <= 2000`.
pub fn ehrenfest_time_average_float(big_n: usize) -> Result<Distribution> {
    if !(2..=FLOAT_LIMIT).contains(&big_n) {
        return Err(Error::OutOfRange(format!(
            "floating evaluation needs 2 <= N <= {FLOAT_LIMIT}, got {big_n}"
        )));
    }
    let s = orthonormal_krawtchouk(big_n);
    let nf = big_n as f64;
    let mut acc: Vec<f64> = (0..=big_n).map(|x| 2.0 * s[0][0].powi(2) * s[0][x].powi(2)).collect();
    for m in 1..big_n {
        let lambda = 1.0 - 2.0 * m as f64 / nf;
        let gap = 1.0 - lambda * lambda;
        let w = s[m][0].powi(2) / (2.0 * gap);
        for x in 0..=big_n {
            let mut term = gap * s[m][x].powi(2);
            if x > 0 && x < big_n {
                let xf = x as f64;
                let pq = xf * (nf - xf) / (nf * nf);
                // sqrt(pi(x)) (phi(x-1) - phi(x+1))
                let d = s[m][x - 1] * ((nf - xf + 1.0) / xf).sqrt() - s[m][x + 1] * ((xf + 1.0) / (nf - xf)).sqrt();
                term += pq * d * d;
            }
            acc[x] += w * term;
        }
    }
    Distribution::new(acc, Provenance::Ehrenfest)
}

/// `pbar(0) - 2^(-2N)`, expected to equal `C(2N, N) / 2^(2N+1)`.
pub fn origin_excess(big_n: usize) -> Result<BigRational> {
    let p = ehrenfest_time_average_exact(big_n)?;
    Ok(&p[0] - ratio(BigInt::one(), BigInt::one() << (2 * big_n)))
}

/// `sum_x pi(x) K_m(x)^2 / C(N,m)` in exact rationals; equals 1.
pub fn exact_normalization(big_n: usize, m: usize) -> Result<BigRational> {
    check_exact_range(big_n, None)?;
    let n = big_n as i64;
    let mut sum = BigRational::zero();
    for x in 0..=n {
        let k = krawtchouk_ext(n, m as i64, x);
        sum += ratio(choose(n, x) * &k * &k, choose(n, m as i64) << big_n);
    }
    Ok(sum)
}

/// Largest `|q_x K_m(x-1) + p_x K_m(x+1) - lambda_m K_m(x)|` over all `m, x`,
/// exact; zero when the Krawtchouk vectors are eigenvectors.
pub fn exact_eigen_defect(big_n: usize) -> Result<BigRational> {
    check_exact_range(big_n, None)?;
    let n = big_n as i64;
    let table = KrawtchoukTable::new(big_n);
    let mut worst = BigRational::zero();
    for m in 0..=n {
        let lambda = ratio(BigInt::from(n - 2 * m), BigInt::from(n));
        for x in 0..=big_n {
            let xi = x as i64;
            let q = ratio(BigInt::from(xi), BigInt::from(n));
            let p = ratio(BigInt::from(n - xi), BigInt::from(n));
            let left = if x > 0 { q * table.at(m, x - 1) } else { BigRational::zero() };
            let right = if x < big_n { p * table.at(m, x + 1) } else { BigRational::zero() };
            let defect = (left + right - &lambda * BigRational::from(table.at(m, x))).abs();
            if defect > worst {
                worst = defect;
            }
        }
    }
    Ok(worst)
}
