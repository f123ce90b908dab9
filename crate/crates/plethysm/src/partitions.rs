//! Integer partitions: representation, conjugation, dominance order and
//! enumeration.
//!
//! A partition is stored densely as its weakly decreasing positive parts;
//! trailing zeros are never stored. Partitions render as `[6,2,2,1,1]` and
//! parse back from the same syntax, with `2x5` accepted as rectangle sugar
//! for `[5,5]`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, MAX_GROUND_SET};

/// A partition of `N`: weakly decreasing positive parts summing to `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from its parts, which must be positive and weakly
    /// decreasing. The empty list is rejected.
    pub fn new(parts: Vec<usize>) -> Result<Self, Error> {
        let ok = !parts.is_empty()
            && parts.iter().all(|&p| p >= 1)
            && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(Error::InvalidPartition(parts))
        }
    }

    /// The rectangle with `rows` rows of length `cols`.
    pub fn rectangle(rows: usize, cols: usize) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "rectangle sides must be positive, got {rows}x{cols}"
            )));
        }
        Partition::new(vec![cols; rows])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The `i`-th part, with missing parts read as 0.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Sum of the parts: the size of the ground set `{1,…,N}`.
    pub fn n_total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The conjugate partition: part `j` counts the parts of `self` that are
    /// `≥ j` (transpose of the Young diagram).
    pub fn conjugate(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.parts[0]);
        for j in 1..=self.parts[0] {
            parts.push(self.parts.iter().take_while(|&&p| p >= j).count());
        }
        Partition { parts }
    }

    /// Dominance order: true iff every prefix sum of `self` is `≥` the
    /// corresponding prefix sum of `other`, with missing parts read as 0.
    /// Comparison is only defined between partitions of the same total.
    pub fn dominates(&self, other: &Partition) -> Result<bool, Error> {
        let (n, m) = (self.n_total(), other.n_total());
        if n != m {
            return Err(Error::WeightMismatch { left: n, right: m });
        }
        let len = self.parts.len().max(other.parts.len());
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..len {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Some((rows, cols))` when the shape is a rectangle.
    pub fn as_rectangle(&self) -> Option<(usize, usize)> {
        let cols = self.parts[0];
        if self.parts.iter().all(|&p| p == cols) {
            Some((self.parts.len(), cols))
        } else {
            None
        }
    }

    /// Hooks are the shapes `(N-r, 1, …, 1)`; single rows and columns count.
    pub fn is_hook(&self) -> bool {
        self.parts.iter().skip(1).all(|&p| p == 1)
    }
}

/// All partitions of `n` in reverse-lexicographic order of parts, each
/// exactly once. `(4)` comes first, `(1,1,1,1)` last. Totals above
/// [`MAX_GROUND_SET`] are rejected since nothing downstream can use them.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if n > MAX_GROUND_SET {
        return Err(Error::GroundSetTooLarge {
            n,
            max: MAX_GROUND_SET,
        });
    }
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    Ok(out)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts the bracket form `[6,2,2,1,1]` and the rectangle sugar `2x5`
    /// (2 rows of 5, i.e. `[5,5]`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let parse_err = |pos: usize, msg: String| Error::Parse {
            what: "partition",
            input: s.to_string(),
            msg,
            pos,
        };
        let t = s.trim();
        let offset = s.len() - s.trim_start().len();

        if !t.starts_with('[') {
            let x = t
                .find(['x', 'X'])
                .ok_or_else(|| parse_err(offset, "expected '[' or a rectangle like 2x5".into()))?;
            let rows: usize = t[..x]
                .parse()
                .map_err(|e| parse_err(offset, format!("bad row count: {e}")))?;
            let cols: usize = t[x + 1..]
                .parse()
                .map_err(|e| parse_err(offset + x + 1, format!("bad column count: {e}")))?;
            return Partition::rectangle(rows, cols)
                .map_err(|e| parse_err(offset, e.to_string()));
        }

        let inner = t
            .strip_prefix('[')
            .expect("starts with bracket")
            .strip_suffix(']')
            .ok_or_else(|| parse_err(offset + t.len(), "expected ']'".into()))?;
        let mut parts = Vec::new();
        let mut pos = offset + 1;
        for piece in inner.split(',') {
            let p: usize = piece
                .trim()
                .parse()
                .map_err(|e| parse_err(pos, format!("bad part {piece:?}: {e}")))?;
            parts.push(p);
            pos += piece.len() + 1;
        }
        Partition::new(parts).map_err(|e| parse_err(offset, e.to_string()))
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
