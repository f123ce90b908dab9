//! Orthogonality matrices.
//!
//! A horizontal tableau μ and a vertical tableau ν are orthogonal when every
//! row block of μ meets every column block of ν in at most one element.
//! `K_λ` is the 0/1 matrix of this relation with rows indexed by `H_λ` and
//! columns by `V_λ`, both in enumeration order. `M^{m,n}` is the Black–List
//! matrix on dissections, whose entries require every intersection to have
//! size exactly one; on rectangles the two conditions coincide (each row
//! block of size n meets n columns, so `≤ 1` everywhere forces `= 1`
//! everywhere) and `M^{m,n} = K_{m×n}` entry for entry.
//!
//! Entries are computed by pairwise popcounts with an early exit on the
//! first intersection of size two or more; that test is the hot path of
//! every scan. Rows can also be produced one at a time through
//! [`MatrixSource`], so the rank engines never need the full matrix.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::exactlinalg::MatrixSource;
use crate::partitions::Partition;
use crate::tableaux::{
    enumerate_horizontal_capped, enumerate_vertical_capped, Block, HorizontalTableau,
    VerticalTableau, DEFAULT_ENUM_CAP,
};
use crate::Error;

/// What a matrix was built from: a shape λ for `K_λ`, or the pair `(m,n)`
/// for the dissection matrix `M^{m,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeTag {
    Shape(Partition),
    Dissections { m: usize, n: usize },
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeTag::Shape(p) => write!(f, "K {p}"),
            ShapeTag::Dissections { m, n } => write!(f, "M {m},{n}"),
        }
    }
}

/// True iff every row block meets every column block in at most one element.
pub(crate) fn orthogonal_blocks(rows: &[Block], cols: &[Block]) -> bool {
    rows.iter()
        .all(|r| cols.iter().all(|c| r.intersection_size(*c) <= 1))
}

/// True iff every row block meets every column block in exactly one element.
pub(crate) fn all_intersections_single(rows: &[Block], cols: &[Block]) -> bool {
    rows.iter()
        .all(|r| cols.iter().all(|c| r.intersection_size(*c) == 1))
}

/// Whether μ ⊥ ν. The tableaux must live on the same ground set.
pub fn is_orthogonal(mu: &HorizontalTableau, nu: &VerticalTableau) -> Result<bool, Error> {
    if mu.n_total() != nu.n_total() {
        return Err(Error::GroundSetMismatch {
            left: mu.n_total(),
            right: nu.n_total(),
        });
    }
    Ok(orthogonal_blocks(mu.rows(), nu.columns()))
}

/// A fully materialized 0/1 orthogonality matrix with its labels. Entries
/// are bit-packed row-major; `entry(i,j) = 1 ⇔ labels are orthogonal`.
#[derive(Debug, Clone)]
pub struct OrthMatrix {
    row_labels: Vec<HorizontalTableau>,
    col_labels: Vec<VerticalTableau>,
    words_per_row: usize,
    bits: Vec<u64>,
    shape_tag: ShapeTag,
}

impl OrthMatrix {
    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        let word = self.bits[row * self.words_per_row + col / 64];
        word >> (col % 64) & 1 == 1
    }

    pub fn row_labels(&self) -> &[HorizontalTableau] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[VerticalTableau] {
        &self.col_labels
    }

    pub fn shape_tag(&self) -> &ShapeTag {
        &self.shape_tag
    }

    pub fn row_sum(&self, row: usize) -> usize {
        (0..self.n_cols()).filter(|&j| self.entry(row, j)).count()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Entrywise equality; labels are not compared.
    pub fn same_entries(&self, other: &OrthMatrix) -> bool {
        self.n_rows() == other.n_rows()
            && self.n_cols() == other.n_cols()
            && self.bits == other.bits
    }
}

impl MatrixSource for OrthMatrix {
    fn n_rows(&self) -> usize {
        self.n_rows()
    }

    fn n_cols(&self) -> usize {
        self.n_cols()
    }

    fn entry(&self, row: usize, col: usize) -> bool {
        OrthMatrix::entry(self, row, col)
    }
}

/// The label lists of an orthogonality matrix with entries computed on
/// demand: enough for streamed rank computations at sizes where the packed
/// matrix would be unwelcome.
pub struct PairSource {
    rows: Vec<HorizontalTableau>,
    cols: Vec<VerticalTableau>,
    exactly_one: bool,
}

impl PairSource {
    pub fn row_labels(&self) -> &[HorizontalTableau] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[VerticalTableau] {
        &self.cols
    }
}

impl MatrixSource for PairSource {
    fn n_rows(&self) -> usize {
        self.rows.len()
    }

    fn n_cols(&self) -> usize {
        self.cols.len()
    }

    fn entry(&self, row: usize, col: usize) -> bool {
        let (r, c) = (self.rows[row].rows(), self.cols[col].columns());
        if self.exactly_one {
            all_intersections_single(r, c)
        } else {
            orthogonal_blocks(r, c)
        }
    }
}

/// Label lists for `K_λ`, with entries computed on demand.
pub fn k_source(shape: &Partition, cap: u64) -> Result<PairSource, Error> {
    Ok(PairSource {
        rows: enumerate_horizontal_capped(shape, cap)?,
        cols: enumerate_vertical_capped(shape, cap)?,
        exactly_one: false,
    })
}

/// Label lists for `M^{m,n}`: rows are the dissections of `{1,…,mn}` into
/// `m` sets of size `n`, columns those into `n` sets of size `m`, and an
/// entry is set when all intersections have size exactly one.
pub fn m_source(m: usize, n: usize, cap: u64) -> Result<PairSource, Error> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "dissection parameters must be positive".into(),
        ));
    }
    let rect = Partition::rectangle(m, n)?;
    Ok(PairSource {
        rows: enumerate_horizontal_capped(&rect, cap)?,
        cols: enumerate_vertical_capped(&rect, cap)?,
        exactly_one: true,
    })
}

fn materialize(source: PairSource, shape_tag: ShapeTag) -> OrthMatrix {
    let n_cols = source.cols.len();
    let words_per_row = n_cols.div_ceil(64);
    let bits: Vec<u64> = source
        .rows
        .par_iter()
        .flat_map_iter(|mu| {
            let mut words = vec![0u64; words_per_row];
            for (j, nu) in source.cols.iter().enumerate() {
                let hit = if source.exactly_one {
                    all_intersections_single(mu.rows(), nu.columns())
                } else {
                    orthogonal_blocks(mu.rows(), nu.columns())
                };
                if hit {
                    words[j / 64] |= 1 << (j % 64);
                }
            }
            words
        })
        .collect();
    OrthMatrix {
        row_labels: source.rows,
        col_labels: source.cols,
        words_per_row,
        bits,
        shape_tag,
    }
}

/// Builds `K_λ` under the default enumeration cap.
pub fn build_k(shape: &Partition) -> Result<OrthMatrix, Error> {
    build_k_capped(shape, DEFAULT_ENUM_CAP)
}

/// Builds `K_λ`: `|H_λ| × |V_λ|`, rows and columns in enumeration order.
pub fn build_k_capped(shape: &Partition, cap: u64) -> Result<OrthMatrix, Error> {
    let source = k_source(shape, cap)?;
    Ok(materialize(source, ShapeTag::Shape(shape.clone())))
}

/// Builds `M^{m,n}` under the default enumeration cap.
pub fn build_m(m: usize, n: usize) -> Result<OrthMatrix, Error> {
    build_m_capped(m, n, DEFAULT_ENUM_CAP)
}

/// Builds the Black–List matrix `M^{m,n}`.
pub fn build_m_capped(m: usize, n: usize, cap: u64) -> Result<OrthMatrix, Error> {
    let source = m_source(m, n, cap)?;
    Ok(materialize(source, ShapeTag::Dissections { m, n }))
}

/// On-disk formats for [`export_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// MatrixMarket coordinate format, `pattern` field, 1-indexed.
    MatrixMarket,
    /// One line of `0`/`1` characters per row.
    Dense,
}

/// Writes the matrix to `path` in the chosen format, plus a label side-file
/// at `<path>.labels`: one row label per line, a blank line, then one column
/// label per line. Output bytes depend only on the matrix.
pub fn export_matrix(mat: &OrthMatrix, path: &Path, format: ExportFormat) -> Result<(), Error> {
    let io_err = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    match format {
        ExportFormat::MatrixMarket => {
            writeln!(out, "%%MatrixMarket matrix coordinate pattern general").map_err(io_err)?;
            writeln!(out, "% {}", mat.shape_tag()).map_err(io_err)?;
            writeln!(
                out,
                "{} {} {}",
                mat.n_rows(),
                mat.n_cols(),
                mat.count_ones()
            )
            .map_err(io_err)?;
            for i in 0..mat.n_rows() {
                for j in 0..mat.n_cols() {
                    if mat.entry(i, j) {
                        writeln!(out, "{} {}", i + 1, j + 1).map_err(io_err)?;
                    }
                }
            }
        }
        ExportFormat::Dense => {
            let mut line = String::with_capacity(mat.n_cols());
            for i in 0..mat.n_rows() {
                line.clear();
                for j in 0..mat.n_cols() {
                    line.push(if mat.entry(i, j) { '1' } else { '0' });
                }
                writeln!(out, "{line}").map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)?;

    let label_path = {
        let mut s = path.as_os_str().to_owned();
        s.push(".labels");
        std::path::PathBuf::from(s)
    };
    let io_err = |e| Error::io(&label_path, e);
    let mut out = BufWriter::new(File::create(&label_path).map_err(io_err)?);
    for label in mat.row_labels() {
        writeln!(out, "{label}").map_err(io_err)?;
    }
    writeln!(out).map_err(io_err)?;
    for label in mat.col_labels() {
        writeln!(out, "{label}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::{enumerate_horizontal, enumerate_vertical};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        let mu: HorizontalTableau = "1,2|3,4".parse().unwrap();
        let nu: VerticalTableau = "1,3|2,4".parse().unwrap();
        assert!(is_orthogonal(&mu, &nu).unwrap());
        let nu_same: VerticalTableau = "1,2|3,4".parse().unwrap();
        assert!(!is_orthogonal(&mu, &nu_same).unwrap());

        let single_row: HorizontalTableau = "1,2,3,4".parse().unwrap();
        let singletons: VerticalTableau = "1|2|3|4".parse().unwrap();
        assert!(is_orthogonal(&single_row, &singletons).unwrap());

        let other: VerticalTableau = "1|2|3".parse().unwrap();
        assert!(matches!(
            is_orthogonal(&single_row, &other),
            Err(Error::GroundSetMismatch { .. })
        ));
    }

    #[test]
    fn k_2x2_is_j_minus_i() {
        let k = build_k(&p(&[2, 2])).unwrap();
        assert_eq!((k.n_rows(), k.n_cols()), (3, 3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(k.entry(i, j), i != j, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn k_single_row_is_one_by_one() {
        let k = build_k(&p(&[5])).unwrap();
        assert_eq!((k.n_rows(), k.n_cols()), (1, 1));
        assert!(k.entry(0, 0));
    }

    #[test]
    fn k_2x3_dimensions_and_row_sums() {
        let k = build_k(&p(&[3, 3])).unwrap();
        assert_eq!((k.n_rows(), k.n_cols()), (10, 15));
        for i in 0..k.n_rows() {
            assert_eq!(k.row_sum(i), 6, "row {i}");
        }
    }

    #[test]
    fn row_sums_of_two_row_rectangles_are_factorials() {
        let mut expected = 1usize;
        for n in 1..=5 {
            expected *= n;
            let k = build_k(&Partition::rectangle(2, n).unwrap()).unwrap();
            for i in 0..k.n_rows() {
                assert_eq!(k.row_sum(i), expected, "K(2x{n}) row {i}");
            }
        }
    }

    #[test]
    fn m_matches_k_on_rectangles() {
        for (m, n) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4)] {
            let mat_m = build_m(m, n).unwrap();
            let mat_k = build_k(&Partition::rectangle(m, n).unwrap()).unwrap();
            assert!(
                mat_m.same_entries(&mat_k),
                "M({m},{n}) differs from K({m}x{n})"
            );
        }
    }

    #[test]
    fn m_1xn_is_single_one() {
        let m = build_m(1, 4).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (1, 1));
        assert!(m.entry(0, 0));
    }

    #[test]
    fn k_transpose_swaps_rectangle_roles() {
        for (m, n) in [(1, 2), (2, 2), (2, 3), (3, 3), (2, 4)] {
            let a = build_k(&Partition::rectangle(m, n).unwrap()).unwrap();
            let b = build_k(&Partition::rectangle(n, m).unwrap()).unwrap();
            assert_eq!((a.n_rows(), a.n_cols()), (b.n_cols(), b.n_rows()));
            for i in 0..a.n_rows() {
                for j in 0..a.n_cols() {
                    assert_eq!(a.entry(i, j), b.entry(j, i), "transpose at {m}x{n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn self_conjugate_shapes_give_square_matrices() {
        for n in 1..=8 {
            for shape in crate::partitions::enumerate_partitions(n).unwrap() {
                if shape.conjugate() == shape {
                    let k = build_k(&shape).unwrap();
                    assert_eq!(k.n_rows(), k.n_cols(), "K({shape}) not square");
                }
            }
        }
    }

    #[test]
    fn entries_match_label_orthogonality() {
        let shape = p(&[3, 2, 1]);
        let k = build_k(&shape).unwrap();
        let hs = enumerate_horizontal(&shape).unwrap();
        let vs = enumerate_vertical(&shape).unwrap();
        assert_eq!(k.row_labels(), &hs[..]);
        assert_eq!(k.col_labels(), &vs[..]);
        for (i, mu) in hs.iter().enumerate() {
            for (j, nu) in vs.iter().enumerate() {
                assert_eq!(k.entry(i, j), is_orthogonal(mu, nu).unwrap());
            }
        }
    }

    #[test]
    fn source_and_matrix_agree() {
        let shape = p(&[3, 3]);
        let source = k_source(&shape, DEFAULT_ENUM_CAP).unwrap();
        let mat = build_k(&shape).unwrap();
        for i in 0..mat.n_rows() {
            for j in 0..mat.n_cols() {
                assert_eq!(MatrixSource::entry(&source, i, j), mat.entry(i, j));
            }
        }
    }

    #[test]
    fn export_formats() {
        let dir = std::env::temp_dir().join(format!("plethysm-ortho-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let k = build_k(&p(&[2, 2])).unwrap();

        let mm = dir.join("k22.mtx");
        export_matrix(&k, &mm, ExportFormat::MatrixMarket).unwrap();
        let text = std::fs::read_to_string(&mm).unwrap();
        assert_eq!(
            text,
            "%%MatrixMarket matrix coordinate pattern general\n\
             % K [2,2]\n\
             3 3 6\n1 2\n1 3\n2 1\n2 3\n3 1\n3 2\n"
        );

        let labels = std::fs::read_to_string(dir.join("k22.mtx.labels")).unwrap();
        assert_eq!(
            labels,
            "1,2|3,4\n1,3|2,4\n1,4|2,3\n\n1,2|3,4\n1,3|2,4\n1,4|2,3\n"
        );

        let dense = dir.join("k22.txt");
        export_matrix(&k, &dense, ExportFormat::Dense).unwrap();
        assert_eq!(
            std::fs::read_to_string(&dense).unwrap(),
            "011\n101\n110\n"
        );
        std::fs::remove_dir_all(&dir).ok();
    }
}
