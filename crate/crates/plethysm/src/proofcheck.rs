//! Mechanical checks of the combinatorial identities behind the linear
//! independence of the rows of `K_{2×n}`.
//!
//! The objects here live on the ground set `{1,…,2n}` of the two-row
//! rectangle. A *partial tableau* is a set of `k < n` disjoint columns
//! (unordered pairs); μ is orthogonal to a partial tableau ν′ when some full
//! vertical tableau containing ν′ is orthogonal to μ, which happens exactly
//! when every column of ν′ splits across the two rows of μ. Three families
//! of identities are verified, each by exhaustive computation:
//!
//! * extension counts — the ν ⊇ ν′ orthogonal to μ correspond to perfect
//!   matchings between the unused halves of the two rows, so there are
//!   `(n−k)!` of them, independent of μ (`count_extensions`,
//!   `zero_filter_identity`);
//! * type coefficients — with `a_μ` the larger count of `{1,…,n}`-elements
//!   in a row of μ, the number of restricted partial tableaux in `P_k`
//!   orthogonal to μ is `c_a^k = (n−a)!·a! / (k!·(n−a−k)!·(a−k)!)`
//!   (`verify_coefficient_count`);
//! * the induction chain — the type-`a` indicator vectors on `H_{2×n}` are
//!   recovered, in exact rational arithmetic, from the `P_k` column sums by
//!   induction on `a`, with the pivot `c_a^{n−a}` divided out at each step;
//!   the final step isolates the tableau μ0 with one row `{1,…,n}`
//!   (`verify_induction_chain`).
//!
//! The brute-force oracles (extension enumeration, existential orthogonality)
//! are kept in this module and never call the fast characterizations they
//! validate.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ortho;
use crate::partitions::Partition;
use crate::tableaux::{
    enumerate_horizontal_capped, enumerate_vertical_capped, factorial, Block, HorizontalTableau,
    VerticalTableau, DEFAULT_ENUM_CAP,
};
use crate::{Error, MAX_GROUND_SET};

/// `k` disjoint columns of a would-be vertical tableau of the two-row
/// rectangle with `n` columns: unordered pairs from `{1,…,2n}`, kept with
/// each pair sorted and pairs ordered by first element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialTableau {
    n: usize,
    columns: Vec<(usize, usize)>,
}

impl PartialTableau {
    pub fn new(n: usize, columns: Vec<(usize, usize)>) -> Result<Self, Error> {
        if n == 0 || 2 * n > MAX_GROUND_SET {
            return Err(Error::InvalidArgument(format!(
                "two-row width {n} out of range"
            )));
        }
        if columns.len() >= n {
            return Err(Error::InvalidArgument(format!(
                "{} columns do not extend to a vertical tableau of width {n}",
                columns.len()
            )));
        }
        let mut seen = 0u64;
        let mut cols: Vec<(usize, usize)> = Vec::with_capacity(columns.len());
        for (x, y) in columns {
            let (lo, hi) = (x.min(y), x.max(y));
            if lo == hi || lo < 1 || hi > 2 * n {
                return Err(Error::InvalidArgument(format!(
                    "column ({x},{y}) is not a pair from {{1,…,{}}}",
                    2 * n
                )));
            }
            let mask = 1u64 << (lo - 1) | 1u64 << (hi - 1);
            if seen & mask != 0 {
                return Err(Error::InvalidArgument(format!(
                    "column ({x},{y}) overlaps another column"
                )));
            }
            seen |= mask;
            cols.push((lo, hi));
        }
        cols.sort_unstable();
        Ok(PartialTableau { n, columns: cols })
    }

    /// Width of the ambient two-row rectangle.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[(usize, usize)] {
        &self.columns
    }

    /// Elements used by the columns, as a bit set.
    pub fn support(&self) -> u64 {
        self.columns
            .iter()
            .fold(0, |acc, &(x, y)| acc | 1 << (x - 1) | 1 << (y - 1))
    }

    /// Whether every column of `self` is a column of `nu`.
    pub fn is_subtableau_of(&self, nu: &VerticalTableau) -> bool {
        self.columns.iter().all(|&(x, y)| {
            let mask = 1u64 << (x - 1) | 1u64 << (y - 1);
            nu.columns().iter().any(|c| c.mask() == mask)
        })
    }
}

impl fmt::Display for PartialTableau {
    /// Same text form as tableaux: `1,4|2,5`. Empty for `k = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.columns.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{x},{y}")?;
        }
        Ok(())
    }
}

impl Serialize for PartialTableau {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Row statistics of a two-row tableau with respect to the reference set
/// `{1,…,n}`: `a` elements in one row, `b` in the other, `a ≥ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypeStat {
    pub a: usize,
    pub b: usize,
    pub reference_size: usize,
}

fn two_row_width(mu: &HorizontalTableau) -> Result<usize, Error> {
    match mu.shape().as_rectangle() {
        Some((2, n)) => Ok(n),
        _ => Err(Error::InvalidArgument(format!(
            "expected a two-row rectangle, got shape {}",
            mu.shape()
        ))),
    }
}

fn check_width(mu: &HorizontalTableau, nu_p: &PartialTableau) -> Result<usize, Error> {
    let n = two_row_width(mu)?;
    if n != nu_p.n() {
        return Err(Error::GroundSetMismatch {
            left: 2 * n,
            right: 2 * nu_p.n(),
        });
    }
    Ok(n)
}

/// The type of μ: the two counts of `{1,…,n}`-elements per row, larger
/// first. The tableau with one row `{1,…,n}` is the only one of type `n`.
pub fn type_of(mu: &HorizontalTableau) -> Result<TypeStat, Error> {
    let n = two_row_width(mu)?;
    let reference = low_mask(n);
    let in_first = (mu.rows()[0].mask() & reference).count_ones() as usize;
    let (a, b) = (in_first.max(n - in_first), in_first.min(n - in_first));
    Ok(TypeStat {
        a,
        b,
        reference_size: n,
    })
}

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Whether μ ⊥ ν′, i.e. some vertical tableau extending ν′ is orthogonal to
/// μ. Characterization: every column of ν′ has its two elements in
/// different rows of μ (the unused row halves then match up freely).
pub fn orthogonal_to_partial(
    mu: &HorizontalTableau,
    nu_p: &PartialTableau,
) -> Result<bool, Error> {
    check_width(mu, nu_p)?;
    let top = mu.rows()[0].mask();
    Ok(nu_p.columns().iter().all(|&(x, y)| {
        let mask = 1u64 << (x - 1) | 1u64 << (y - 1);
        (top & mask).count_ones() == 1
    }))
}

/// Invokes `f` with each perfect matching of the set bits of `pool`, as a
/// list of pair blocks.
fn for_each_matching(pool: u64, current: &mut Vec<Block>, f: &mut impl FnMut(&[Block])) {
    if pool == 0 {
        f(current);
        return;
    }
    let lowest = pool & pool.wrapping_neg();
    let rest = pool ^ lowest;
    let mut others = rest;
    while others != 0 {
        let partner = others & others.wrapping_neg();
        others ^= partner;
        current.push(Block::from_mask(lowest | partner));
        for_each_matching(rest ^ partner, current, f);
        current.pop();
    }
}

/// The number of vertical tableaux ν ⊇ ν′ with μ ⊥ ν, by brute-force
/// enumeration of the extensions. Equals `(n−k)!` when μ ⊥ ν′ and 0
/// otherwise; this function stays independent of that formula.
pub fn count_extensions(mu: &HorizontalTableau, nu_p: &PartialTableau) -> Result<u64, Error> {
    let n = check_width(mu, nu_p)?;
    let shape = mu.shape().clone();
    let fixed: Vec<Block> = nu_p
        .columns()
        .iter()
        .map(|&(x, y)| Block::from_members([x, y]))
        .collect();
    let free = low_mask(2 * n) & !nu_p.support();
    let mut count = 0u64;
    let mut current = Vec::with_capacity(n - nu_p.k());
    for_each_matching(free, &mut current, &mut |matching| {
        let mut columns = fixed.clone();
        columns.extend_from_slice(matching);
        let nu = VerticalTableau::new(shape.clone(), columns)
            .expect("disjoint pairs covering the ground set form a vertical tableau");
        if ortho::is_orthogonal(mu, &nu).expect("same ground set") {
            count += 1;
        }
    });
    Ok(count)
}

/// Checks the column-sum identity behind the 0-filter property of ν′: over
/// all μ of the two-row rectangle,
/// `Σ_{ν ⊇ ν′} K[μ,ν] = (n−k)! · [μ ⊥ ν′]`, entry by entry.
pub fn zero_filter_identity(nu_p: &PartialTableau) -> Result<bool, Error> {
    Ok(zero_filter_failure(nu_p, DEFAULT_ENUM_CAP)?.is_none())
}

/// As [`zero_filter_identity`], but reports the first offending μ with the
/// observed and expected coefficients.
pub fn zero_filter_failure(
    nu_p: &PartialTableau,
    cap: u64,
) -> Result<Option<(HorizontalTableau, u64, u64)>, Error> {
    let shape = Partition::rectangle(2, nu_p.n())?;
    let hs = enumerate_horizontal_capped(&shape, cap)?;
    let vs = enumerate_vertical_capped(&shape, cap)?;
    zero_filter_failure_with(&hs, &vs, nu_p)
}

/// Core of the column-sum check, on pre-enumerated label lists so sweeps
/// over many ν′ enumerate only once.
pub(crate) fn zero_filter_failure_with(
    hs: &[HorizontalTableau],
    vs: &[VerticalTableau],
    nu_p: &PartialTableau,
) -> Result<Option<(HorizontalTableau, u64, u64)>, Error> {
    let extensions: Vec<&VerticalTableau> =
        vs.iter().filter(|nu| nu_p.is_subtableau_of(nu)).collect();
    let factor = (1..=nu_p.n() - nu_p.k()).map(|i| i as u64).product::<u64>();
    for mu in hs {
        let column_sum = extensions
            .iter()
            .filter(|nu| ortho::is_orthogonal(mu, nu).expect("same ground set"))
            .count() as u64;
        let expected = if orthogonal_to_partial(mu, nu_p)? {
            factor
        } else {
            0
        };
        if column_sum != expected {
            return Ok(Some((mu.clone(), column_sum, expected)));
        }
    }
    Ok(None)
}

/// All partial tableaux with `k` columns drawn from the full alphabet
/// `{1,…,2n}`, canonically ordered, each exactly once.
pub fn enumerate_full_partials(n: usize, k: usize) -> Result<Vec<PartialTableau>, Error> {
    if n == 0 || 2 * n > MAX_GROUND_SET {
        return Err(Error::InvalidArgument(format!(
            "two-row width {n} out of range"
        )));
    }
    if k >= n {
        return Err(Error::InvalidArgument(format!(
            "k={k} columns cannot extend to width {n}"
        )));
    }
    Ok(enumerate_pair_sets(2 * n, k)
        .into_iter()
        .map(|columns| PartialTableau { n, columns })
        .collect())
}

/// The set `P_k`: partial tableaux whose `2k` entries are drawn from
/// `{1,…,n}` only. Requires `k ≤ ⌊n/2⌋`; there are
/// `n! / (2^k · k! · (n−2k)!)` of them.
pub fn enumerate_restricted_partials(n: usize, k: usize) -> Result<Vec<PartialTableau>, Error> {
    if n == 0 || 2 * n > MAX_GROUND_SET {
        return Err(Error::InvalidArgument(format!(
            "two-row width {n} out of range"
        )));
    }
    if k > n / 2 {
        return Err(Error::InvalidArgument(format!(
            "k={k} exceeds floor({n}/2), so {{1,…,{n}}} cannot host {k} disjoint pairs"
        )));
    }
    Ok(enumerate_pair_sets(n, k)
        .into_iter()
        .map(|columns| PartialTableau { n, columns })
        .collect())
}

/// All sets of `k` disjoint pairs from `{1,…,alphabet}`, each once, in
/// lexicographic order of the canonical pair lists.
fn enumerate_pair_sets(alphabet: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        alphabet: usize,
        start: usize,
        left: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for lo in start..=alphabet {
            if used[lo] {
                continue;
            }
            used[lo] = true;
            for hi in lo + 1..=alphabet {
                if used[hi] {
                    continue;
                }
                used[hi] = true;
                current.push((lo, hi));
                rec(alphabet, lo + 1, left - 1, used, current, out);
                current.pop();
                used[hi] = false;
            }
            used[lo] = false;
        }
    }
    let mut out = Vec::new();
    rec(
        alphabet,
        1,
        k,
        &mut vec![false; alphabet + 1],
        &mut Vec::with_capacity(k),
        &mut out,
    );
    out
}

/// The coefficient `c_a^k = (n−a)!·a! / (k!·(n−a−k)!·(a−k)!)`: the number
/// of restricted partial tableaux in `P_k` orthogonal to a fixed μ of type
/// `a`. Zero outside `0 ≤ k ≤ min(a, n−a)`.
pub fn coefficient_c(n: usize, a: usize, k: usize) -> BigUint {
    if a > n || k > a || k > n - a {
        return BigUint::zero();
    }
    factorial(n - a) * factorial(a) / (factorial(k) * factorial(n - a - k) * factorial(a - k))
}

/// Checks, for every μ of the two-row rectangle of width `n`, that the
/// brute-force count of ν′ ∈ P_k orthogonal to μ equals
/// `coefficient_c(n, a_μ, k)`, and that the count vanishes for
/// `a_μ > n − k`.
pub fn verify_coefficient_count(n: usize, k: usize) -> Result<bool, Error> {
    let partials = enumerate_restricted_partials(n, k)?;
    let shape = Partition::rectangle(2, n)?;
    let hs = enumerate_horizontal_capped(&shape, DEFAULT_ENUM_CAP)?;
    for mu in &hs {
        let count = partials
            .iter()
            .filter(|np| orthogonal_to_partial(mu, np).expect("matching width"))
            .count();
        let a = type_of(mu)?.a;
        if BigUint::from(count) != coefficient_c(n, a, k) {
            return Ok(false);
        }
        if a > n - k && count != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One step of the induction chain: the type-`a` indicator is expressed as
/// a rational combination of the `P_k` column counts (`k = n − a`) and the
/// previously established indicators, dividing out the pivot `c_a^k`.
#[derive(Debug, Clone, Serialize)]
pub struct InductionStep {
    pub type_a: usize,
    pub k: usize,
    /// The pivot value `c_a^k`, as a decimal string.
    pub pivot_c: String,
    pub pivot_nonzero: bool,
    /// Coefficient applied to the `P_k` sum: `1 / c_a^k`.
    pub lead_coeff: String,
    /// Coefficients applied to earlier type indicators:
    /// `(a', −c_{a'}^k / c_a^k)`.
    pub prior_coeffs: Vec<(usize, String)>,
    pub pass: bool,
}

/// Outcome of [`verify_induction_chain`].
#[derive(Debug, Clone, Serialize)]
pub struct InductionReport {
    pub n: usize,
    pub steps: Vec<InductionStep>,
    /// Whether the final step pinned down the single tableau of type `n`
    /// (one row equal to `{1,…,n}`).
    pub mu0_isolated: bool,
    pub pass: bool,
}

/// Runs the induction over types `a = n−⌊n/2⌋, …, n` in exact rational
/// arithmetic, checking at each step that the derived vector equals the 0/1
/// indicator of the type-`a` tableaux.
pub fn verify_induction_chain(n: usize) -> Result<InductionReport, Error> {
    verify_induction_chain_capped(n, DEFAULT_ENUM_CAP)
}

pub fn verify_induction_chain_capped(n: usize, cap: u64) -> Result<InductionReport, Error> {
    let shape = Partition::rectangle(2, n)?;
    let hs = enumerate_horizontal_capped(&shape, cap)?;
    let types: Vec<usize> = hs
        .iter()
        .map(|mu| type_of(mu).map(|t| t.a))
        .collect::<Result<_, _>>()?;

    let ratio = |x: &BigUint| BigRational::from_integer(BigInt::from_biguint(Sign::Plus, x.clone()));
    let a_min = n - n / 2;
    let mut steps = Vec::new();
    let mut established: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut all_pass = true;

    for a in a_min..=n {
        let k = n - a;
        let partials = enumerate_restricted_partials(n, k)?;
        let mut derived: Vec<BigRational> = hs
            .iter()
            .map(|mu| {
                let count = partials
                    .iter()
                    .filter(|np| orthogonal_to_partial(mu, np).expect("matching width"))
                    .count();
                BigRational::from_integer(BigInt::from(count))
            })
            .collect();

        let pivot = coefficient_c(n, a, k);
        let pivot_nonzero = !pivot.is_zero();
        let pivot_rat = ratio(&pivot);

        let mut prior_coeffs = Vec::new();
        for (a2, s2) in &established {
            let c2 = coefficient_c(n, *a2, k);
            let c2_rat = ratio(&c2);
            if !c2.is_zero() {
                for (d, s) in derived.iter_mut().zip(s2) {
                    *d -= &c2_rat * s;
                }
            }
            let shown = if pivot_nonzero {
                (-&c2_rat / &pivot_rat).to_string()
            } else {
                format!("-{c2}/0")
            };
            prior_coeffs.push((*a2, shown));
        }

        let pass = if pivot_nonzero {
            for d in &mut derived {
                *d /= &pivot_rat;
            }
            derived
                .iter()
                .zip(&types)
                .all(|(d, &t)| if t == a { d.is_one() } else { d.is_zero() })
        } else {
            false
        };
        all_pass &= pass;

        steps.push(InductionStep {
            type_a: a,
            k,
            pivot_c: pivot.to_string(),
            pivot_nonzero,
            lead_coeff: if pivot_nonzero {
                (BigRational::one() / &pivot_rat).to_string()
            } else {
                "1/0".into()
            },
            prior_coeffs,
            pass,
        });
        established.push((a, derived));
    }

    // The last derived vector must be the indicator of the single tableau
    // with one row {1,…,n}.
    let mu0_isolated = {
        let last = &established.last().expect("at least one step").1;
        let reference = low_mask(n);
        hs.iter().zip(last).all(|(mu, d)| {
            let is_mu0 = mu.rows().iter().any(|b| b.mask() == reference);
            if is_mu0 {
                d.is_one()
            } else {
                d.is_zero()
            }
        })
    };

    Ok(InductionReport {
        n,
        steps,
        mu0_isolated,
        pass: all_pass && mu0_isolated,
    })
}

/// One serialized record per checked identity, for machine-readable
/// reports.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_prime: Option<String>,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}
