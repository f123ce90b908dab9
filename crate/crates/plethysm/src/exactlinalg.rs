//! Exact rank computation for 0/1 matrices.
//!
//! Two engines are provided. `rank_mod_p` row-reduces over a prime field,
//! folding a stream of rows into an echelon basis so that memory stays at
//! `O(rank × n_cols)` words. `rank_exact` runs fraction-free (Bareiss)
//! elimination with exact big integers, so the result is the rank over the
//! rationals. `certified_rank` combines them under an explicit policy:
//!
//! * a single prime reaching the dimension bound certifies full rank over
//!   the rationals (mod-p rank is a lower bound for rational rank) —
//!   `CERTIFIED_FULL`;
//! * otherwise, when the dimensions permit, the fraction-free engine
//!   settles the rank exactly — `CERTIFIED_EXACT`;
//! * otherwise only the maximum observed mod-p rank is reported —
//!   `MOD_P_EVIDENCE`. Rank deficiency is never certified from modular
//!   arithmetic alone.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::Error;

/// Default primes tried by [`certified_rank`]: the three largest primes
/// below `2^31`. One of them reaching the dimension bound is the expected
/// outcome on full-rank inputs.
pub const DEFAULT_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Default side cap for the fraction-free engine.
pub const DEFAULT_EXACT_CAP: usize = 2000;

/// Random access to a 0/1 matrix. Rank consumers pull rows one at a time,
/// so implementations may compute entries on demand and never materialize
/// the full matrix.
pub trait MatrixSource: Sync {
    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;
    fn entry(&self, row: usize, col: usize) -> bool;

    fn fill_row(&self, row: usize, out: &mut [u8]) {
        for (col, slot) in out.iter_mut().enumerate() {
            *slot = self.entry(row, col) as u8;
        }
    }
}

impl MatrixSource for Vec<Vec<u8>> {
    fn n_rows(&self) -> usize {
        self.len()
    }

    fn n_cols(&self) -> usize {
        self.first().map_or(0, |r| r.len())
    }

    fn entry(&self, row: usize, col: usize) -> bool {
        self[row][col] != 0
    }

    fn fill_row(&self, row: usize, out: &mut [u8]) {
        out.copy_from_slice(&self[row]);
    }
}

/// How a rank value was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Certification {
    /// Rank equals `min(rows, cols)`, witnessed over some prime field.
    CertifiedFull,
    /// Rank computed over the rationals by fraction-free elimination.
    CertifiedExact,
    /// Only modular ranks are available; the true rank may be larger.
    ModPEvidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    ModP,
    FractionFree,
}

/// Outcome of a certified rank computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    #[serde(rename = "rows")]
    pub n_rows: usize,
    #[serde(rename = "cols")]
    pub n_cols: usize,
    pub certification: Certification,
    pub moduli_used: Vec<u64>,
    pub method: RankMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl RankReport {
    /// True when the rank provably equals `min(rows, cols)`.
    pub fn is_full(&self) -> bool {
        self.rank == self.n_rows.min(self.n_cols)
            && matches!(
                self.certification,
                Certification::CertifiedFull | Certification::CertifiedExact
            )
    }

    /// Drops the timing field so reruns serialize byte-identically.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

/// Primes to try and the exact-method cap used by [`certified_rank`].
#[derive(Debug, Clone)]
pub struct CertPolicy {
    pub primes: Vec<u64>,
    pub max_exact: usize,
}

impl Default for CertPolicy {
    fn default() -> Self {
        CertPolicy {
            primes: DEFAULT_PRIMES.to_vec(),
            max_exact: DEFAULT_EXACT_CAP,
        }
    }
}

fn check_modulus(p: u64) -> Result<(), Error> {
    if p >= 1 << 31 {
        return Err(Error::ModulusTooLarge(p));
    }
    // Trial division is plenty below 2^31.
    if p < 2 || (p > 2 && p.is_multiple_of(2)) {
        return Err(Error::NonPrimeModulus(p));
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return Err(Error::NonPrimeModulus(p));
        }
        d += 2;
    }
    Ok(())
}

/// Reduction modulo a fixed `p < 2^31` without a hardware divide in the hot
/// loop: a truncated reciprocal gives a quotient off by at most one.
#[derive(Clone, Copy)]
struct ModP {
    p: u64,
    recip: u128, // ⌊2^93 / p⌋
}

impl ModP {
    fn new(p: u64) -> ModP {
        ModP {
            p,
            recip: (1u128 << 93) / p as u128,
        }
    }

    /// Reduces `t < p·2^31`.
    #[inline]
    fn reduce(self, t: u64) -> u64 {
        let q = ((t as u128 * self.recip) >> 93) as u64;
        let r = t - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `a` must be nonzero mod `p`.
    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// Row-echelon basis over GF(p), folded one row at a time. Basis rows are
/// normalized to a leading 1 and kept sorted by pivot column, so identical
/// input streams produce identical bases.
struct Echelon {
    modp: ModP,
    n_cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl Echelon {
    fn new(p: u64, n_cols: usize) -> Echelon {
        Echelon {
            modp: ModP::new(p),
            n_cols,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis and inserts the remainder if nonzero.
    /// Returns whether the rank grew. Entries must already lie in `[0, p)`.
    fn fold(&mut self, mut row: Vec<u32>) -> bool {
        let modp = self.modp;
        let p = modp.p;
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = row[pc] as u64;
            if c == 0 {
                continue;
            }
            let mult = p - c; // row += mult · basis[i]
            let basis = &self.rows[i];
            for (x, &b) in row[pc..].iter_mut().zip(&basis[pc..]) {
                if b != 0 {
                    *x = modp.reduce(*x as u64 + mult * b as u64) as u32;
                }
            }
        }
        let Some(pivot) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = modp.inv(row[pivot] as u64);
        for x in &mut row[pivot..] {
            if *x != 0 {
                *x = modp.mul(*x as u64, inv) as u32;
            }
        }
        let at = self.pivots.partition_point(|&pc| pc < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, row);
        true
    }

    fn fold_bits(&mut self, bits: &[u8]) -> bool {
        self.fold(bits.iter().map(|&b| (b != 0) as u32).collect())
    }
}

/// Rank of a streamed 0/1 matrix over GF(p). Rows are folded in order into
/// an echelon basis; the stream stops being consumed once the rank reaches
/// the column count. Deterministic for a fixed stream.
pub fn rank_mod_p<I, R>(rows: I, p: u64) -> Result<usize, Error>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[u8]>,
{
    check_modulus(p)?;
    let mut echelon: Option<Echelon> = None;
    for (index, row) in rows.into_iter().enumerate() {
        let row = row.as_ref();
        let ech = echelon.get_or_insert_with(|| Echelon::new(p, row.len()));
        if row.len() != ech.n_cols {
            return Err(Error::RowLength {
                index,
                got: row.len(),
                expected: ech.n_cols,
            });
        }
        ech.fold_bits(row);
        if ech.rank() == ech.n_cols {
            break;
        }
    }
    Ok(echelon.map_or(0, |e| e.rank()))
}

fn rank_of_source_mod_p<S: MatrixSource + ?Sized>(source: &S, p: u64) -> Result<usize, Error> {
    check_modulus(p)?;
    let (n_rows, n_cols) = (source.n_rows(), source.n_cols());
    let mut ech = Echelon::new(p, n_cols);
    let mut buf = vec![0u8; n_cols];
    for i in 0..n_rows {
        source.fill_row(i, &mut buf);
        ech.fold_bits(&buf);
        if ech.rank() == n_cols {
            break;
        }
    }
    Ok(ech.rank())
}

/// A dense matrix over a prime field. The modulus must be a prime below
/// `2^31` and entries are reduced at construction.
#[derive(Debug, Clone)]
pub struct PrimeFieldMatrix {
    modulus: u64,
    rows: Vec<Vec<u32>>,
}

impl PrimeFieldMatrix {
    pub fn new(modulus: u64, rows: Vec<Vec<i64>>) -> Result<Self, Error> {
        check_modulus(modulus)?;
        let width = rows.first().map_or(0, |r| r.len());
        let mut reduced = Vec::with_capacity(rows.len());
        for (index, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::RowLength {
                    index,
                    got: row.len(),
                    expected: width,
                });
            }
            reduced.push(
                row.into_iter()
                    .map(|x| x.rem_euclid(modulus as i64) as u32)
                    .collect(),
            );
        }
        Ok(PrimeFieldMatrix {
            modulus,
            rows: reduced,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        let n_cols = self.rows.first().map_or(0, |r| r.len());
        let mut ech = Echelon::new(self.modulus, n_cols);
        for row in &self.rows {
            ech.fold(row.clone());
            if ech.rank() == n_cols {
                break;
            }
        }
        ech.rank()
    }
}

/// Fraction-free single-step elimination; entries stay integers and each
/// division is exact. Column skipping handles rank-deficient input.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(pivot_row) = (rank..n_rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let (upper, lower) = m.split_at_mut(rank + 1);
        let pivot_vec = &upper[rank];
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                // Still subject to the cross-multiplication scaling.
                for c in (col + 1..n_cols).rev() {
                    let t = &pivot_vec[col] * &row[c];
                    debug_assert!((&t % &prev).is_zero());
                    row[c] = t / &prev;
                }
                continue;
            }
            for c in (col + 1..n_cols).rev() {
                let t = &pivot_vec[col] * &row[c] - &row[col] * &pivot_vec[c];
                debug_assert!((&t % &prev).is_zero());
                row[c] = t / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Exact rank over the rationals of a 0/1 matrix source, via fraction-free
/// elimination. Fails when either dimension exceeds `cap`.
pub fn rank_exact<S: MatrixSource + ?Sized>(source: &S, cap: usize) -> Result<usize, Error> {
    let (n_rows, n_cols) = (source.n_rows(), source.n_cols());
    if n_rows > cap || n_cols > cap {
        return Err(Error::ExactCap {
            rows: n_rows,
            cols: n_cols,
            cap,
        });
    }
    let mut buf = vec![0u8; n_cols];
    let mut m = Vec::with_capacity(n_rows);
    for i in 0..n_rows {
        source.fill_row(i, &mut buf);
        m.push(buf.iter().map(|&b| BigInt::from(b)).collect());
    }
    Ok(bareiss_rank(m))
}

/// Exact rank of a general integer matrix.
pub fn rank_exact_int(rows: &[Vec<i64>], cap: usize) -> Result<usize, Error> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, |r| r.len());
    if n_rows > cap || n_cols > cap {
        return Err(Error::ExactCap {
            rows: n_rows,
            cols: n_cols,
            cap,
        });
    }
    for (index, row) in rows.iter().enumerate() {
        if row.len() != n_cols {
            return Err(Error::RowLength {
                index,
                got: row.len(),
                expected: n_cols,
            });
        }
    }
    Ok(bareiss_rank(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    ))
}

/// Runs the policy's primes in order, returning `CERTIFIED_FULL` as soon as
/// one reaches the dimension bound; otherwise falls back to the exact
/// engine when the dimensions permit, and to `MOD_P_EVIDENCE` when not.
pub fn certified_rank<S: MatrixSource + ?Sized>(
    source: &S,
    policy: &CertPolicy,
) -> Result<RankReport, Error> {
    let start = Instant::now();
    let (n_rows, n_cols) = (source.n_rows(), source.n_cols());
    let bound = n_rows.min(n_cols);
    let mut moduli_used = Vec::new();
    let mut best = 0;
    for &p in &policy.primes {
        let r = rank_of_source_mod_p(source, p)?;
        moduli_used.push(p);
        best = best.max(r);
        if r == bound {
            return Ok(RankReport {
                rank: r,
                n_rows,
                n_cols,
                certification: Certification::CertifiedFull,
                moduli_used,
                method: RankMethod::ModP,
                elapsed_ms: Some(start.elapsed().as_millis() as u64),
            });
        }
    }
    if n_rows <= policy.max_exact && n_cols <= policy.max_exact {
        let r = rank_exact(source, policy.max_exact)?;
        debug_assert!(r >= best, "mod-p rank exceeded exact rank");
        return Ok(RankReport {
            rank: r,
            n_rows,
            n_cols,
            certification: Certification::CertifiedExact,
            moduli_used,
            method: RankMethod::FractionFree,
            elapsed_ms: Some(start.elapsed().as_millis() as u64),
        });
    }
    Ok(RankReport {
        rank: best,
        n_rows,
        n_cols,
        certification: Certification::ModPEvidence,
        moduli_used,
        method: RankMethod::ModP,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}
