//! Verdict assembly: the operations behind the CLI subcommands, reusable
//! from other front ends.
//!
//! Conjecture 1 asks whether λ ⊵ λ' in dominance order forces the rows of
//! `K_λ` to be linearly independent; conjecture 2 asks whether `K_λ` always
//! has full rank. Checking proceeds cheapest-first: dominance and the exact
//! counts `|H_λ|`, `|V_λ|` need no enumeration, and `|H_λ| > |V_λ|` already
//! refutes row independence without building the matrix. Only then is the
//! matrix streamed into the certified rank engine.
//!
//! Verdicts carry explicit accounting (`matrix_built`, `resource_limited`)
//! so reports show what was actually computed, and scan output is stripped
//! of timing so reruns are byte-identical.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactlinalg::{certified_rank, CertPolicy, RankReport};
use crate::ortho;
use crate::partitions::{enumerate_partitions, Partition};
use crate::proofcheck::{self, CheckRecord, InductionReport, PartialTableau};
use crate::tableaux::{count_horizontal, count_vertical, DEFAULT_ENUM_CAP};
use crate::Error;

/// Which conjecture a check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Conjecture1,
    Conjecture2,
}

impl std::str::FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "conjecture1" => Ok(CheckMode::Conjecture1),
            "conjecture2" => Ok(CheckMode::Conjecture2),
            _ => Err(Error::Parse {
                what: "mode",
                input: s.to_string(),
                msg: "expected conjecture1 or conjecture2".into(),
                pos: 0,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Rank equals the row count, certified: conjecture 1 holds here.
    RowsIndependent,
    /// `|H_λ| > |V_λ|`: rows cannot be independent, no matrix needed.
    FailsByCounting,
    /// Rank equals `min(|H_λ|, |V_λ|)`, certified: conjecture 2 holds here.
    FullRank,
    /// Exact arithmetic certified a rank strictly below the bound.
    NotFullRankCertified,
    /// Nothing certified: hypothesis not met, caps hit, or modular
    /// evidence only.
    Undetermined,
}

/// Outcome of checking one shape.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureVerdict {
    pub shape: String,
    pub mode: CheckMode,
    pub dominance_holds: bool,
    pub h_count: String,
    pub v_count: String,
    /// Resource accounting: whether the orthogonality matrix was ever
    /// constructed for this verdict.
    pub matrix_built: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_report: Option<RankReport>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub resource_limited: bool,
}

impl ConjectureVerdict {
    /// A certified contradiction of the requested conjecture.
    pub fn is_certified_failure(&self) -> bool {
        matches!(
            self.verdict,
            Verdict::FailsByCounting | Verdict::NotFullRankCertified
        )
    }

    pub fn is_resource_undetermined(&self) -> bool {
        self.verdict == Verdict::Undetermined && self.resource_limited
    }
}

/// Caps and rank policy shared by all checking operations.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Cap on any single tableau enumeration.
    pub max_enum: u64,
    /// Primes tried and the exact-engine cap.
    pub policy: CertPolicy,
    /// Largest `n` for which `verify_proof` sweeps every full-alphabet
    /// partial tableau; above it a deterministic sample is used.
    pub full_alphabet_limit: usize,
    /// Largest `n` accepted by `verify_proof` at all.
    pub verify_proof_limit: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_enum: DEFAULT_ENUM_CAP,
            policy: CertPolicy::default(),
            full_alphabet_limit: 5,
            verify_proof_limit: 6,
        }
    }
}

/// Counting-only report for a shape: exact class sizes and the dominance
/// comparison, no enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub shape: String,
    pub h_count: String,
    pub v_count: String,
    pub dominance_holds: bool,
    pub comparison: String,
}

pub fn count_shape(shape: &Partition) -> CountReport {
    let h = count_horizontal(shape);
    let v = count_vertical(shape);
    let comparison = match h.cmp(&v) {
        std::cmp::Ordering::Greater => "h_count > v_count",
        std::cmp::Ordering::Equal => "h_count = v_count",
        std::cmp::Ordering::Less => "h_count < v_count",
    };
    CountReport {
        shape: shape.to_string(),
        h_count: h.to_string(),
        v_count: v.to_string(),
        dominance_holds: shape
            .dominates(&shape.conjugate())
            .expect("same total as own conjugate"),
        comparison: comparison.to_string(),
    }
}

/// Checks one shape against the chosen conjecture. Resource caps surface as
/// `UNDETERMINED` verdicts with a reason; only configuration mistakes (such
/// as a composite modulus) error out.
pub fn check_shape(
    shape: &Partition,
    mode: CheckMode,
    cfg: &CheckConfig,
) -> Result<ConjectureVerdict, Error> {
    let h = count_horizontal(shape);
    let v = count_vertical(shape);
    let dominance_holds = shape
        .dominates(&shape.conjugate())
        .expect("same total as own conjugate");
    let mut verdict = ConjectureVerdict {
        shape: shape.to_string(),
        mode,
        dominance_holds,
        h_count: h.to_string(),
        v_count: v.to_string(),
        matrix_built: false,
        rank_report: None,
        verdict: Verdict::Undetermined,
        reason: None,
        resource_limited: false,
    };

    if mode == CheckMode::Conjecture1 {
        if !dominance_holds {
            verdict.reason = Some("dominance hypothesis not met".into());
            return Ok(verdict);
        }
        if h > v {
            verdict.verdict = Verdict::FailsByCounting;
            return Ok(verdict);
        }
    }

    let cap = BigUint::from(cfg.max_enum);
    if h > cap || v > cap {
        verdict.reason = Some(format!(
            "enumeration of {h}x{v} tableaux exceeds the cap of {}",
            cfg.max_enum
        ));
        verdict.resource_limited = true;
        return Ok(verdict);
    }

    let source = match ortho::k_source(shape, cfg.max_enum) {
        Ok(source) => source,
        Err(err) if err.is_resource_limit() => {
            verdict.reason = Some(err.to_string());
            verdict.resource_limited = true;
            return Ok(verdict);
        }
        Err(err) => return Err(err),
    };
    verdict.matrix_built = true;
    let report = certified_rank(&source, &cfg.policy)?;
    let n_rows = report.n_rows;
    let bound = match mode {
        CheckMode::Conjecture1 => n_rows,
        CheckMode::Conjecture2 => report.n_rows.min(report.n_cols),
    };
    let full = report.rank == bound && report.is_full();
    let exact_deficient = report.certification
        == crate::exactlinalg::Certification::CertifiedExact
        && report.rank < bound;
    verdict.rank_report = Some(report);
    verdict.verdict = if full {
        match mode {
            CheckMode::Conjecture1 => Verdict::RowsIndependent,
            CheckMode::Conjecture2 => Verdict::FullRank,
        }
    } else if exact_deficient {
        Verdict::NotFullRankCertified
    } else {
        verdict.reason = Some(
            "modular evidence only: no prime certified full rank and the exact engine \
             is capped out"
                .into(),
        );
        verdict.resource_limited = true;
        Verdict::Undetermined
    };
    Ok(verdict)
}

/// One verdict per partition of `N`, in enumeration order. Shapes are
/// checked concurrently; aggregation order and output bytes do not depend
/// on the thread count, and timing is stripped for reproducibility.
pub fn scan(n: usize, mode: CheckMode, cfg: &CheckConfig) -> Result<Vec<ConjectureVerdict>, Error> {
    let shapes = enumerate_partitions(n)?;
    shapes
        .par_iter()
        .map(|shape| {
            check_shape(shape, mode, cfg).map(|mut verdict| {
                verdict.rank_report = verdict.rank_report.map(RankReport::without_timing);
                verdict
            })
        })
        .collect()
}

/// Rank check of the dissection matrix `M^{m,n}` against the Black–List
/// sufficient condition, plus the entrywise comparison with `K_{m×n}`.
#[derive(Debug, Clone, Serialize)]
pub struct BlacklistReport {
    pub m: usize,
    pub n: usize,
    /// `|I_{n,m}|`, the number of rows of `M^{m,n}`.
    pub rows: String,
    /// `|I_{m,n}|`, the number of columns.
    pub cols: String,
    pub rank_report: RankReport,
    pub rank_equals_rows: bool,
    pub matches_k_rectangle: bool,
    pub note: String,
}

pub fn blacklist(m: usize, n: usize, cfg: &CheckConfig) -> Result<BlacklistReport, Error> {
    if m == 0 || n == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    let mat_m = ortho::build_m_capped(m, n, cfg.max_enum)?;
    let mat_k = ortho::build_k_capped(&Partition::rectangle(m, n)?, cfg.max_enum)?;
    let matches_k_rectangle = mat_m.same_entries(&mat_k);
    let rank_report = certified_rank(&mat_m, &cfg.policy)?;
    let rank_equals_rows = rank_report.rank == mat_m.n_rows()
        && matches!(
            rank_report.certification,
            crate::exactlinalg::Certification::CertifiedFull
                | crate::exactlinalg::Certification::CertifiedExact
        );
    let note = if rank_equals_rows {
        format!(
            "rank(M^{{{m},{n}}}) = |I({n},{m})|: the Black-List criterion holds, which \
             settles the Foulkes containment for ({n}, r) with 1 <= r <= {m}"
        )
    } else {
        format!("rank(M^{{{m},{n}}}) was not certified equal to |I({n},{m})|")
    };
    Ok(BlacklistReport {
        m,
        n,
        rows: mat_m.n_rows().to_string(),
        cols: mat_m.n_cols().to_string(),
        rank_report,
        rank_equals_rows,
        matches_k_rectangle,
        note,
    })
}

/// Aggregate outcome of the identity suite for one width `n`.
#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub n: usize,
    /// Whether every full-alphabet partial tableau was swept (as opposed to
    /// a deterministic sample).
    pub zero_filter_exhaustive: bool,
    pub records: Vec<CheckRecord>,
    pub induction: InductionReport,
    pub left_kernel_rank: RankReport,
    /// `rank(K_{2×n}) = |H_{2×n}|`: the rows are linearly independent.
    pub left_kernel_trivial: bool,
    pub pass: bool,
}

impl ProofReport {
    /// Flattens everything into uniform records, for CSV output.
    pub fn as_records(&self) -> Vec<CheckRecord> {
        let mut records = self.records.clone();
        for step in &self.induction.steps {
            records.push(CheckRecord {
                check: "induction_step",
                n: self.n,
                k: Some(step.k),
                nu_prime: None,
                expected: format!("indicator of type {} with pivot {}", step.type_a, step.pivot_c),
                observed: if step.pass {
                    "derived vector matches".into()
                } else {
                    "mismatch".into()
                },
                pass: step.pass,
            });
        }
        records.push(CheckRecord {
            check: "left_kernel",
            n: self.n,
            k: None,
            nu_prime: None,
            expected: format!("rank {}", self.left_kernel_rank.n_rows),
            observed: format!(
                "rank {} ({:?})",
                self.left_kernel_rank.rank, self.left_kernel_rank.certification
            ),
            pass: self.left_kernel_trivial,
        });
        records
    }
}

/// Runs the full identity suite for the two-row rectangle of width `n`: the
/// column-sum check for every (or a sampled set of) full-alphabet partial
/// tableau, the coefficient counts for every feasible `k`, the induction
/// chain, and the triviality of the left kernel of `K_{2×n}`.
pub fn verify_proof(n: usize, cfg: &CheckConfig) -> Result<ProofReport, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > cfg.verify_proof_limit {
        return Err(Error::VerifyProofLimit {
            n,
            max: cfg.verify_proof_limit,
        });
    }
    let shape = Partition::rectangle(2, n)?;
    let hs = crate::tableaux::enumerate_horizontal_capped(&shape, cfg.max_enum)?;
    let vs = crate::tableaux::enumerate_vertical_capped(&shape, cfg.max_enum)?;

    let zero_filter_exhaustive = n <= cfg.full_alphabet_limit;
    let mut records = Vec::new();
    for k in 1..n {
        let partials = proofcheck::enumerate_full_partials(n, k)?;
        let selected: Vec<&PartialTableau> = if zero_filter_exhaustive {
            partials.iter().collect()
        } else {
            // Deterministic stride sample across the enumeration order.
            let want = 100.min(partials.len());
            (0..want)
                .map(|i| &partials[i * partials.len() / want])
                .collect()
        };
        let factor: u64 = (1..=(n - k) as u64).product();
        // (ν′ text, first failing μ with observed and expected sums)
        type SweepOutcome = (String, Option<(String, u64, u64)>);
        let outcomes: Vec<SweepOutcome> = selected
            .par_iter()
            .map(|nu_p| {
                let failure = proofcheck::zero_filter_failure_with(&hs, &vs, nu_p)
                    .expect("widths agree by construction")
                    .map(|(mu, got, want)| (mu.to_string(), got, want));
                (nu_p.to_string(), failure)
            })
            .collect();
        for (nu_prime, failure) in outcomes {
            let (observed, pass) = match failure {
                None => ("column sums match".to_string(), true),
                Some((mu, got, want)) => {
                    (format!("mu {mu}: column sum {got}, expected {want}"), false)
                }
            };
            records.push(CheckRecord {
                check: "zero_filter",
                n,
                k: Some(k),
                nu_prime: Some(nu_prime),
                expected: format!("{factor} on orthogonal mu, 0 elsewhere"),
                observed,
                pass,
            });
        }
    }

    for k in 0..=n / 2 {
        let pass = proofcheck::verify_coefficient_count(n, k)?;
        records.push(CheckRecord {
            check: "coefficient_count",
            n,
            k: Some(k),
            nu_prime: None,
            expected: "count of orthogonal restricted partials equals c_a^k per type".into(),
            observed: if pass {
                format!("all {} tableaux match", hs.len())
            } else {
                "mismatch".into()
            },
            pass,
        });
    }

    let induction = proofcheck::verify_induction_chain_capped(n, cfg.max_enum)?;

    let source = ortho::k_source(&shape, cfg.max_enum)?;
    let left_kernel_rank = certified_rank(&source, &cfg.policy)?;
    let left_kernel_trivial = left_kernel_rank.rank == hs.len()
        && matches!(
            left_kernel_rank.certification,
            crate::exactlinalg::Certification::CertifiedFull
                | crate::exactlinalg::Certification::CertifiedExact
        );

    let pass = records.iter().all(|r| r.pass) && induction.pass && left_kernel_trivial;
    Ok(ProofReport {
        n,
        zero_filter_exhaustive,
        records,
        induction,
        left_kernel_rank,
        left_kernel_trivial,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(text: &str) -> Partition {
        text.parse().unwrap()
    }

    #[test]
    fn count_report_for_counterexample() {
        let report = count_shape(&shape("[6,2,2,1,1]"));
        assert_eq!(report.h_count, "41580");
        assert_eq!(report.v_count, "27720");
        assert!(report.dominance_holds);
        assert_eq!(report.comparison, "h_count > v_count");
    }

    #[test]
    fn counterexample_fails_by_counting_without_matrix() {
        let verdict = check_shape(
            &shape("[6,2,2,1,1]"),
            CheckMode::Conjecture1,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.verdict, Verdict::FailsByCounting);
        assert!(!verdict.matrix_built);
        assert!(verdict.rank_report.is_none());
        assert!(verdict.is_certified_failure());
    }

    #[test]
    fn dominance_hypothesis_gate() {
        // (1,1,1) is dominated by its conjugate (3), not the other way.
        let verdict = check_shape(
            &shape("[1,1,1]"),
            CheckMode::Conjecture1,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.verdict, Verdict::Undetermined);
        assert!(!verdict.resource_limited);
        assert!(!verdict.matrix_built);
    }

    #[test]
    fn single_row_is_full_rank() {
        let verdict = check_shape(
            &shape("[7]"),
            CheckMode::Conjecture2,
            &CheckConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.verdict, Verdict::FullRank);
        let report = verdict.rank_report.unwrap();
        assert_eq!((report.rank, report.n_rows, report.n_cols), (1, 1, 1));
    }

    #[test]
    fn two_row_rectangles_are_rows_independent() {
        for n in 2..=4 {
            let verdict = check_shape(
                &shape(&format!("2x{n}")),
                CheckMode::Conjecture1,
                &CheckConfig::default(),
            )
            .unwrap();
            assert_eq!(verdict.verdict, Verdict::RowsIndependent, "n={n}");
        }
    }

    #[test]
    fn enumeration_cap_yields_resource_undetermined() {
        let cfg = CheckConfig {
            max_enum: 2,
            ..CheckConfig::default()
        };
        let verdict = check_shape(&shape("[2,2]"), CheckMode::Conjecture2, &cfg).unwrap();
        assert_eq!(verdict.verdict, Verdict::Undetermined);
        assert!(verdict.is_resource_undetermined());
        assert!(!verdict.matrix_built);
    }

    #[test]
    fn scan_small() {
        let cfg = CheckConfig::default();
        let verdicts = scan(4, CheckMode::Conjecture2, &cfg).unwrap();
        assert_eq!(verdicts.len(), 5);
        assert!(verdicts.iter().all(|v| v.verdict == Verdict::FullRank));
        let shapes: Vec<&str> = verdicts.iter().map(|v| v.shape.as_str()).collect();
        assert_eq!(
            shapes,
            vec!["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]
        );
        assert!(verdicts
            .iter()
            .all(|v| v.rank_report.as_ref().is_none_or(|r| r.elapsed_ms.is_none())));

        let single = scan(1, CheckMode::Conjecture2, &cfg).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].verdict, Verdict::FullRank);
    }

    #[test]
    fn scan_deterministic_serialization() {
        let cfg = CheckConfig::default();
        let a = serde_json::to_string(&scan(6, CheckMode::Conjecture1, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&scan(6, CheckMode::Conjecture1, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn blacklist_small_cases() {
        let cfg = CheckConfig::default();
        let report = blacklist(2, 2, &cfg).unwrap();
        assert_eq!(report.rows, "3");
        assert_eq!(report.rank_report.rank, 3);
        assert!(report.rank_equals_rows);
        assert!(report.matches_k_rectangle);

        let report = blacklist(2, 3, &cfg).unwrap();
        assert_eq!(report.rows, "10");
        assert_eq!(report.rank_report.rank, 10);
        assert!(report.rank_equals_rows);

        let report = blacklist(1, 4, &cfg).unwrap();
        assert_eq!(report.rank_report.rank, 1);

        assert!(blacklist(3, 2, &cfg).is_err());
    }

    #[test]
    fn verify_proof_small() {
        let cfg = CheckConfig::default();
        for n in 2..=4 {
            let report = verify_proof(n, &cfg).unwrap();
            assert!(report.pass, "suite failed at n={n}");
            assert!(report.zero_filter_exhaustive);
            assert!(report.left_kernel_trivial);
            assert!(report.induction.mu0_isolated);
            assert!(report.records.iter().all(|r| r.pass));
        }
        assert!(matches!(
            verify_proof(7, &cfg),
            Err(Error::VerifyProofLimit { .. })
        ));
    }
}
