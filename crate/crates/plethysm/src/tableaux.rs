//! Horizontal and vertical tableaux.
//!
//! A horizontal tableau of shape λ is an unordered set partition of
//! `{1,…,N}` whose block sizes are the parts of λ (rows with their entries
//! forgotten); a vertical tableau is the column analogue, with block sizes
//! drawn from the conjugate λ'. Both are kept in a canonical form — blocks
//! sorted by size descending, then by minimum element ascending — which is
//! the single source of identity and of enumeration order.
//!
//! Enumeration generates canonical forms directly: the block containing the
//! smallest unplaced element is chosen at each step, one branch per distinct
//! remaining block size, so no duplicates arise and no post-hoc dedup is
//! needed. Counts are exact big integers; `12!` already strains 32 bits and
//! scans overflow 64 bits well inside the supported range.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::partitions::Partition;
use crate::{Error, MAX_GROUND_SET};

/// Default cap on the number of tableaux a single enumeration may produce.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// A non-empty subset of the ground set `{1,…,N}`, packed into one word.
/// Bit `e-1` stands for element `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block(u64);

impl Block {
    pub fn from_mask(mask: u64) -> Block {
        Block(mask)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Block {
        let mut mask = 0u64;
        for e in members {
            debug_assert!((1..=MAX_GROUND_SET).contains(&e));
            mask |= 1 << (e - 1);
        }
        Block(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_GROUND_SET).contains(&e) && self.0 >> (e - 1) & 1 == 1
    }

    /// Smallest member; blocks are non-empty wherever this is called.
    pub fn min_element(self) -> usize {
        debug_assert!(self.0 != 0);
        self.0.trailing_zeros() as usize + 1
    }

    pub fn intersection_size(self, other: Block) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let e = mask.trailing_zeros() as usize + 1;
                mask &= mask - 1;
                Some(e)
            }
        })
    }
}

impl Ord for Block {
    /// Lexicographic order on the ascending member sequence, so `{1,4}`
    /// precedes `{2,3}`. This is the order used to fix enumeration output.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.0, other.0);
        while a != 0 && b != 0 {
            let (ea, eb) = (a.trailing_zeros(), b.trailing_zeros());
            match ea.cmp(&eb) {
                Ordering::Equal => {
                    a &= a - 1;
                    b &= b - 1;
                }
                ord => return ord,
            }
        }
        a.count_ones().cmp(&b.count_ones())
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.members().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Canonical block order inside a tableau: size descending, then minimum
/// element ascending. Blocks are disjoint, so the order is total.
fn canonical_block_sort(blocks: &mut [Block]) {
    blocks.sort_by_key(|b| (std::cmp::Reverse(b.len()), b.min_element()));
}

/// An h-equivalence class of fillings: a set partition of `{1,…,N}` with
/// block sizes equal to the parts of `shape`, rows in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HorizontalTableau {
    shape: Partition,
    rows: Vec<Block>,
}

/// A v-equivalence class: block sizes are the parts of the conjugate of
/// `shape`. Dissections of `{1,…,mn}` into equal-size sets are exactly the
/// vertical (or horizontal) tableaux of the corresponding rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VerticalTableau {
    shape: Partition,
    columns: Vec<Block>,
}

fn validate_blocks(blocks: &[Block], sizes: &Partition) -> Result<(), Error> {
    let n = sizes.n_total();
    if n > MAX_GROUND_SET {
        return Err(Error::GroundSetTooLarge {
            n,
            max: MAX_GROUND_SET,
        });
    }
    let mut seen = 0u64;
    for b in blocks {
        if seen & b.mask() != 0 {
            return Err(Error::InvalidArgument(format!(
                "blocks are not pairwise disjoint near {b}"
            )));
        }
        seen |= b.mask();
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if seen != full {
        return Err(Error::InvalidArgument(format!(
            "blocks do not cover the ground set {{1,…,{n}}}"
        )));
    }
    let mut got: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
    got.sort_unstable_by(|a, b| b.cmp(a));
    if got != sizes.parts() {
        return Err(Error::InvalidArgument(format!(
            "block sizes {got:?} do not match {sizes}"
        )));
    }
    Ok(())
}

impl HorizontalTableau {
    /// Builds the class from its row blocks in any order; the result is
    /// canonicalized. Blocks must be disjoint, cover `{1,…,N}` and have the
    /// parts of `shape` as their size multiset.
    pub fn new(shape: Partition, mut rows: Vec<Block>) -> Result<Self, Error> {
        validate_blocks(&rows, &shape)?;
        canonical_block_sort(&mut rows);
        Ok(HorizontalTableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Block] {
        &self.rows
    }

    pub fn n_total(&self) -> usize {
        self.shape.n_total()
    }
}

impl VerticalTableau {
    /// `shape` is the original λ; the blocks are columns, with sizes matching
    /// the conjugate λ'.
    pub fn new(shape: Partition, mut columns: Vec<Block>) -> Result<Self, Error> {
        validate_blocks(&columns, &shape.conjugate())?;
        canonical_block_sort(&mut columns);
        Ok(VerticalTableau { shape, columns })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn columns(&self) -> &[Block] {
        &self.columns
    }

    pub fn n_total(&self) -> usize {
        self.shape.n_total()
    }
}

fn fmt_blocks(blocks: &[Block], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            write!(f, "|")?;
        }
        write!(f, "{b}")?;
    }
    Ok(())
}

impl fmt::Display for HorizontalTableau {
    /// Text form `1,2,3|4,5,6`: blocks joined by `|`, members by `,`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_blocks(&self.rows, f)
    }
}

impl fmt::Display for VerticalTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_blocks(&self.columns, f)
    }
}

fn parse_blocks(s: &str) -> Result<Vec<Block>, Error> {
    let parse_err = |pos: usize, msg: String| Error::Parse {
        what: "tableau",
        input: s.to_string(),
        msg,
        pos,
    };
    let mut blocks = Vec::new();
    let mut pos = 0;
    for chunk in s.split('|') {
        let mut members = Vec::new();
        for piece in chunk.split(',') {
            let e: usize = piece
                .trim()
                .parse()
                .map_err(|err| parse_err(pos, format!("bad element {piece:?}: {err}")))?;
            if !(1..=MAX_GROUND_SET).contains(&e) {
                return Err(parse_err(pos, format!("element {e} out of range")));
            }
            members.push(e);
            pos += piece.len() + 1;
        }
        blocks.push(Block::from_members(members));
    }
    Ok(blocks)
}

/// Shape with the block sizes as parts, sorted descending.
fn shape_of_blocks(blocks: &[Block]) -> Result<Partition, Error> {
    let mut sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(sizes)
}

impl FromStr for HorizontalTableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let blocks = parse_blocks(s)?;
        HorizontalTableau::new(shape_of_blocks(&blocks)?, blocks)
    }
}

impl FromStr for VerticalTableau {
    type Err = Error;

    /// The blocks of the text form are columns, so the shape is the
    /// conjugate of their size multiset.
    fn from_str(s: &str) -> Result<Self, Error> {
        let blocks = parse_blocks(s)?;
        VerticalTableau::new(shape_of_blocks(&blocks)?.conjugate(), blocks)
    }
}

impl serde::Serialize for HorizontalTableau {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl serde::Serialize for VerticalTableau {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=n {
        f *= BigUint::from(i);
    }
    f
}

fn count_set_partitions(sizes: &Partition) -> BigUint {
    // N! / (∏ sizes_i! · ∏ multiplicity_j!)
    let mut denom = BigUint::one();
    let mut run = 1usize;
    for (i, &p) in sizes.parts().iter().enumerate() {
        denom *= factorial(p);
        if i + 1 < sizes.parts().len() && sizes.parts()[i + 1] == p {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    factorial(sizes.n_total()) / denom
}

/// `|H_λ|`: the number of horizontal tableaux of shape λ, i.e.
/// `N! / (∏ λ_i! · ∏ m_j!)` with `m_j` the multiplicity of part length `j`.
pub fn count_horizontal(shape: &Partition) -> BigUint {
    count_set_partitions(shape)
}

/// `|V_λ| = |H_{λ'}|`.
pub fn count_vertical(shape: &Partition) -> BigUint {
    count_set_partitions(&shape.conjugate())
}

/// Number of dissections of `{1,…,mn}` into `n` sets of cardinality `m`:
/// `(mn)! / ((m!)^n · n!)`.
pub fn count_dissections(m: usize, n: usize) -> BigUint {
    factorial(m * n) / (factorial(m).pow(n as u32) * factorial(n))
}

/// Enumerates all set partitions of `{1,…,N}` whose block-size multiset is
/// `sizes`, each exactly once, emitted as canonical block lists in
/// lexicographic order of canonical forms.
fn enumerate_set_partitions(sizes: &Partition, cap: u64) -> Result<Vec<Vec<Block>>, Error> {
    let n = sizes.n_total();
    if n > MAX_GROUND_SET {
        return Err(Error::GroundSetTooLarge {
            n,
            max: MAX_GROUND_SET,
        });
    }
    let count = count_set_partitions(sizes);
    let within = count.to_u64().map(|c| c <= cap).unwrap_or(false);
    if !within {
        return Err(Error::EnumerationCap {
            count: count.to_string(),
            cap,
        });
    }

    // Distinct sizes with how many blocks of each remain to be placed.
    let mut size_counts: Vec<(usize, usize)> = Vec::new();
    for &p in sizes.parts() {
        match size_counts.last_mut() {
            Some((s, c)) if *s == p => *c += 1,
            _ => size_counts.push((p, 1)),
        }
    }

    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut current: Vec<Block> = Vec::with_capacity(sizes.num_parts());

    // The block containing the smallest unplaced element is picked at each
    // level; only one branch per distinct size, since equal-size blocks are
    // interchangeable. This yields each class exactly once.
    fn rec(
        remaining: u64,
        size_counts: &mut Vec<(usize, usize)>,
        current: &mut Vec<Block>,
        out: &mut Vec<Vec<Block>>,
    ) {
        if remaining == 0 {
            let mut blocks = current.clone();
            canonical_block_sort(&mut blocks);
            out.push(blocks);
            return;
        }
        let lowest = remaining & remaining.wrapping_neg();
        let rest = remaining ^ lowest;
        for idx in 0..size_counts.len() {
            let (size, cnt) = size_counts[idx];
            if cnt == 0 {
                continue;
            }
            size_counts[idx].1 -= 1;
            choose_subset(rest, size - 1, lowest, &mut |block_mask, rem| {
                current.push(Block::from_mask(block_mask));
                rec(rem, size_counts, current, out);
                current.pop();
            });
            size_counts[idx].1 += 1;
        }
    }

    // Invokes `f(block ∪ acc, remaining ∖ block)` for every `want`-subset of
    // the set bits of `pool`, in ascending member order.
    fn choose_subset(pool: u64, want: usize, acc: u64, f: &mut dyn FnMut(u64, u64)) {
        if want == 0 {
            f(acc, pool);
            return;
        }
        if (pool.count_ones() as usize) < want {
            return;
        }
        let lowest = pool & pool.wrapping_neg();
        let rest = pool ^ lowest;
        choose_subset(rest, want - 1, acc | lowest, f);
        choose_subset(rest, want, acc, &mut |mask, rem| f(mask, rem | lowest));
    }

    rec(full, &mut size_counts, &mut current, &mut out);
    debug_assert_eq!(BigUint::from(out.len()), count);

    // The recursion emits nearly sorted output; sorting by canonical form
    // pins the documented order regardless of generation details.
    out.sort_unstable();
    Ok(out)
}

/// All horizontal tableaux of `shape` under the default enumeration cap.
pub fn enumerate_horizontal(shape: &Partition) -> Result<Vec<HorizontalTableau>, Error> {
    enumerate_horizontal_capped(shape, DEFAULT_ENUM_CAP)
}

/// All horizontal tableaux of `shape`, in deterministic lexicographic order
/// of canonical forms. Errors out, never truncates, when the exact count
/// exceeds `cap`.
pub fn enumerate_horizontal_capped(
    shape: &Partition,
    cap: u64,
) -> Result<Vec<HorizontalTableau>, Error> {
    let lists = enumerate_set_partitions(shape, cap)?;
    Ok(lists
        .into_iter()
        .map(|rows| HorizontalTableau {
            shape: shape.clone(),
            rows,
        })
        .collect())
}

/// All vertical tableaux of `shape` under the default enumeration cap.
pub fn enumerate_vertical(shape: &Partition) -> Result<Vec<VerticalTableau>, Error> {
    enumerate_vertical_capped(shape, DEFAULT_ENUM_CAP)
}

/// All vertical tableaux of `shape`: the horizontal enumeration of the
/// conjugate shape, relabelled as columns of `shape`, in the same order.
pub fn enumerate_vertical_capped(
    shape: &Partition,
    cap: u64,
) -> Result<Vec<VerticalTableau>, Error> {
    let lists = enumerate_set_partitions(&shape.conjugate(), cap)?;
    Ok(lists
        .into_iter()
        .map(|columns| VerticalTableau {
            shape: shape.clone(),
            columns,
        })
        .collect())
}
