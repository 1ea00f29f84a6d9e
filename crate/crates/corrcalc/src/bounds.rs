//! Number-theoretic machinery for the multiplicity bounds and partition
//! functions: partition numbers, the Möbius function, aperiodic necklace
//! counts, rational homotopy dimensions of the covering classifying spaces,
//! and the spectral β-sums. Counting is exact big-integer arithmetic;
//! floating point appears only in the β-sums.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("argument must be at least 1, got {0}")]
    BelowOne(u64),
    #[error("necklace sum for Q({a},{b}) is not divisible by {a}; implementation fault")]
    NonIntegerNecklace { a: u64, b: u64 },
    #[error("multiplicity oracle must satisfy N_n >= 1, got N_{n} = 0")]
    ZeroMultiplicity { n: u64 },
    #[error("oracle supplies no value for n = {0}")]
    MissingOracleValue(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("empty basis")]
    EmptyBasis,
    #[error("no invariant value for basis label {0}")]
    MissingFunctionValue(String),
    #[error("eigenvalues must be strictly increasing")]
    UnsortedSpectrum,
}

/// p(n), the number of partitions of n, by the pentagonal-number recurrence.
pub fn partitions(n: u64) -> BigUint {
    let n = n as usize;
    let mut table: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for i in 1..=n {
        let mut acc = BigInt::zero();
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * BigInt::from(table[i - g1].clone());
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                acc += sign * BigInt::from(table[i - g2].clone());
            }
            k += 1;
        }
        table[i] = acc.to_biguint().expect("partition counts are nonnegative");
    }
    table[n].clone()
}

/// Möbius function by trial-division factorization.
pub fn moebius(d: u64) -> Result<i8, BoundsError> {
    if d == 0 {
        return Err(BoundsError::BelowOne(0));
    }
    let mut rest = d;
    let mut prime_count = 0u32;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            rest /= p;
            if rest % p == 0 {
                return Ok(0);
            }
            prime_count += 1;
        }
        p += 1;
    }
    if rest > 1 {
        prime_count += 1;
    }
    Ok(if prime_count % 2 == 0 { 1 } else { -1 })
}

fn divisors(a: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for d in 1..=a {
        if a % d == 0 {
            out.push(d);
        }
    }
    out
}

/// Q(a,b) = (1/a) Σ_{d|a} μ(d) b^{a/d}, the number of aperiodic b-ary
/// necklaces of length a. Integrality of the Möbius sum is asserted.
pub fn necklace_q(a: u64, b: u64) -> Result<BigInt, BoundsError> {
    if a == 0 {
        return Err(BoundsError::BelowOne(0));
    }
    let mut sum = BigInt::zero();
    for d in divisors(a) {
        let mu = moebius(d)?;
        if mu != 0 {
            let term = BigInt::from(b).pow((a / d) as u32);
            sum += mu * term;
        }
    }
    let (q, r) = num_integer::div_rem(sum, BigInt::from(a));
    if !r.is_zero() {
        return Err(BoundsError::NonIntegerNecklace { a, b });
    }
    Ok(q)
}

/// Rational homotopy dimension D with `π_k ⊗ Q = Q^D` for the order-n
/// covering classifying space, with b = p(n) - 1:
/// - k = 4: D = p(n)
/// - k ≡ 1, 4, 10 (mod 12), k ∉ {1, 4}: D = Q((k-1)/3, b)
/// - k ≡ 7 (mod 12): D = Q((k-1)/3, b) + Q((k-1)/6, b)
/// - otherwise 0.
pub fn rational_homotopy_dim(k: u64, n: u64) -> Result<BigInt, BoundsError> {
    if k == 0 || n == 0 {
        return Err(BoundsError::BelowOne(0));
    }
    if k == 4 {
        return Ok(BigInt::from(partitions(n)));
    }
    let b: BigInt = BigInt::from(partitions(n)) - 1;
    let b_u64 = match u64::try_from(b.clone()) {
        Ok(v) => v,
        Err(_) => return big_dim(k, &b),
    };
    match k % 12 {
        1 | 4 | 10 if k != 1 => necklace_q((k - 1) / 3, b_u64),
        7 => Ok(necklace_q((k - 1) / 3, b_u64)? + necklace_q((k - 1) / 6, b_u64)?),
        _ => Ok(BigInt::zero()),
    }
}

// necklace sums over a big base, for n large enough that p(n)-1 overflows u64
fn big_dim(k: u64, b: &BigInt) -> Result<BigInt, BoundsError> {
    let q = |a: u64| -> Result<BigInt, BoundsError> {
        let mut sum = BigInt::zero();
        for d in divisors(a) {
            let mu = moebius(d)?;
            if mu != 0 {
                sum += mu * b.pow((a / d) as u32);
            }
        }
        let (qv, r) = num_integer::div_rem(sum, BigInt::from(a));
        if !r.is_zero() {
            return Err(BoundsError::NonIntegerNecklace { a, b: 0 });
        }
        Ok(qv)
    };
    match k % 12 {
        1 | 4 | 10 if k != 1 => q((k - 1) / 3),
        7 => Ok(q((k - 1) / 3)? + q((k - 1) / 6)?),
        _ => Ok(BigInt::zero()),
    }
}

/// User-supplied eigenvalue multiplicities N_n, bounded below by 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityOracle {
    counts: BTreeMap<u64, u64>,
}

impl MultiplicityOracle {
    pub fn new(counts: BTreeMap<u64, u64>) -> Result<Self, BoundsError> {
        for (&n, &v) in &counts {
            if n == 0 {
                return Err(BoundsError::BelowOne(0));
            }
            if v == 0 {
                return Err(BoundsError::ZeroMultiplicity { n });
            }
        }
        Ok(MultiplicityOracle { counts })
    }

    /// The constant oracle N ≡ 1 on 1..=n_max.
    pub fn trivial(n_max: u64) -> Self {
        MultiplicityOracle {
            counts: (1..=n_max).map(|n| (n, 1)).collect(),
        }
    }

    /// Count labels of a composition table by right covering degree.
    pub fn from_degrees(degrees: impl IntoIterator<Item = u64>) -> Result<Self, BoundsError> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for d in degrees {
            if d == 0 {
                return Err(BoundsError::BelowOne(0));
            }
            *counts.entry(d).or_default() += 1;
        }
        Ok(MultiplicityOracle { counts })
    }

    pub fn get(&self, n: u64) -> Result<u64, BoundsError> {
        self.counts
            .get(&n)
            .copied()
            .ok_or(BoundsError::MissingOracleValue(n))
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionFunctionValue {
    /// Partial sum Σ_{n ≤ n_max} N_n n^{-β}.
    pub value: f64,
    /// The lower bracket: the ζ partial sum Σ_{n ≤ n_max} n^{-β}.
    pub zeta_lower: f64,
}

/// Partial partition function for the right Hamiltonian together with its
/// ζ lower bracket; the oracle must be total on 1..=n_max.
pub fn partition_function(
    beta: f64,
    oracle: &MultiplicityOracle,
    n_max: u64,
) -> Result<PartitionFunctionValue, BoundsError> {
    if n_max == 0 {
        return Err(BoundsError::BelowOne(0));
    }
    let mut value = 0.0;
    let mut zeta_lower = 0.0;
    for n in 1..=n_max {
        let weight = (n as f64).powf(-beta);
        value += oracle.get(n)? as f64 * weight;
        zeta_lower += weight;
    }
    Ok(PartitionFunctionValue { value, zeta_lower })
}

/// Localized zeta partial sum Σ_{n ≤ n_max} counts(n) n^{-β} for prime p.
/// The localized counts are user data (zeros allowed); p tags the
/// localization and must be prime.
pub fn localized_zeta(
    beta: f64,
    p: u64,
    counts: &BTreeMap<u64, u64>,
    n_max: u64,
) -> Result<f64, BoundsError> {
    if !is_prime(p) {
        return Err(BoundsError::NotPrime(p));
    }
    let mut sum = 0.0;
    for n in 1..=n_max {
        let c = counts
            .get(&n)
            .copied()
            .ok_or(BoundsError::MissingOracleValue(n))?;
        sum += c as f64 * (n as f64).powf(-beta);
    }
    Ok(sum)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Gibbs functional on a truncated basis: the n^{-β}-weighted average of
/// the label values, each degree weighted by its oracle multiplicity
/// (1 when no oracle is given). Converges to the value at the degree-1
/// label as β grows.
pub fn gibbs_functional(
    f_values: &BTreeMap<String, f64>,
    beta: f64,
    basis: &[(String, u64)],
    oracle: Option<&MultiplicityOracle>,
) -> Result<f64, BoundsError> {
    if basis.is_empty() {
        return Err(BoundsError::EmptyBasis);
    }
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (label, degree) in basis {
        if *degree == 0 {
            return Err(BoundsError::BelowOne(0));
        }
        let f = f_values
            .get(label)
            .copied()
            .ok_or_else(|| BoundsError::MissingFunctionValue(label.clone()))?;
        let multiplicity = match oracle {
            Some(o) => o.get(*degree)? as f64,
            None => 1.0,
        };
        let weight = multiplicity * (*degree as f64).powf(-beta);
        numerator += f * weight;
        denominator += weight;
    }
    Ok(numerator / denominator)
}

/// Eigenvalues `log n` with multiplicities, plus the β-range the summary
/// was requested for.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<(f64, u64)>,
    pub beta_range: (f64, f64),
}

impl SpectralSummary {
    pub fn from_oracle(
        oracle: &MultiplicityOracle,
        beta_range: (f64, f64),
    ) -> Result<Self, BoundsError> {
        let eigenvalues: Vec<(f64, u64)> = oracle
            .counts()
            .iter()
            .map(|(&n, &mult)| ((n as f64).ln(), mult))
            .collect();
        for pair in eigenvalues.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(BoundsError::UnsortedSpectrum);
            }
        }
        Ok(SpectralSummary {
            eigenvalues,
            beta_range,
        })
    }
}
