//! Numerical invariants of cyclic and abelian covers: pushforward summands,
//! Riemann–Hurwitz, and degree/`h⁰` obstructions for covers of curves.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover degree {0} must be at least 2")]
    InvalidStage(u32),
    #[error("cover has no stages")]
    NoStages,
    #[error("Riemann-Hurwitz gives non-integral genus (2g - 2 = {0})")]
    NonIntegralGenus(i64),
    #[error("Riemann-Hurwitz gives negative genus {0}")]
    NegativeGenus(i64),
    #[error("cover degree must be positive")]
    ZeroDegree,
    #[error("stage {0} has no decomposition")]
    StageMissingCertificate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverStage {
    pub d: u32,
    /// `M_i = O(m_deg)` on the base.
    pub m_deg: u32,
    pub branch_ref: Option<String>,
}

/// A tower of cyclic covers of degrees `d_1, …, d_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCoverSpec {
    stages: Vec<CoverStage>,
}

impl AbelianCoverSpec {
    pub fn new(stages: Vec<CoverStage>) -> Result<Self, CoverError> {
        if stages.is_empty() {
            return Err(CoverError::NoStages);
        }
        if let Some(s) = stages.iter().find(|s| s.d < 2) {
            return Err(CoverError::InvalidStage(s.d));
        }
        Ok(AbelianCoverSpec { stages })
    }

    /// Stages of the given degrees with `M_i = O(1)`.
    pub fn from_degrees(ds: &[u32]) -> Result<Self, CoverError> {
        Self::new(ds.iter().map(|&d| CoverStage { d, m_deg: 1, branch_ref: None }).collect())
    }

    pub fn stages(&self) -> &[CoverStage] {
        &self.stages
    }

    pub fn total_degree(&self) -> u64 {
        self.stages.iter().map(|s| s.d as u64).product()
    }
}

/// The summand `⊗_i M_i^{k_i}` is recorded by its exponents `k_i ∈ {0, −1, …, 1 − d_i}`.
pub type Summand = Vec<i64>;

/// Exponent tuples of the line bundles in `π_* O_X`, first coordinate
/// varying fastest.
pub fn pushforward_summands(spec: &AbelianCoverSpec) -> Vec<Summand> {
    let ds: Vec<i64> = spec.stages.iter().map(|s| s.d as i64).collect();
    let total = spec.total_degree() as usize;
    (0..total)
        .map(|mut idx| {
            ds.iter()
                .map(|&d| {
                    let k = (idx as i64) % d;
                    idx /= d as usize;
                    -k
                })
                .collect()
        })
        .collect()
}

/// Invariants of a totally ramified cyclic cover `C → D` of curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCoverArithmetic {
    pub g_base: u32,
    pub d: u32,
    pub branch_degree: u32,
    pub ramification_degree: u64,
    pub g_top: u64,
}

impl CurveCoverArithmetic {
    /// `2g_top − 2 = d(2g_base − 2) + R`, recomputed from the fields.
    pub fn check_identity(&self) -> bool {
        let lhs = 2 * self.g_top as i64 - 2;
        let rhs = self.d as i64 * (2 * self.g_base as i64 - 2) + self.ramification_degree as i64;
        lhs == rhs && self.ramification_degree == (self.d as u64 - 1) * self.branch_degree as u64
    }

    pub fn is_etale(&self) -> bool {
        self.branch_degree == 0
    }
}

pub fn riemann_hurwitz(g_base: u32, d: u32, branch_degree: u32) -> Result<CurveCoverArithmetic, CoverError> {
    if d == 0 {
        return Err(CoverError::ZeroDegree);
    }
    let ram = (d as i64 - 1) * branch_degree as i64;
    let two_g_minus_2 = d as i64 * (2 * g_base as i64 - 2) + ram;
    if two_g_minus_2 % 2 != 0 {
        return Err(CoverError::NonIntegralGenus(two_g_minus_2));
    }
    let g = two_g_minus_2 / 2 + 1;
    if g < 0 {
        return Err(CoverError::NegativeGenus(g));
    }
    Ok(CurveCoverArithmetic { g_base, d, branch_degree, ramification_degree: ram as u64, g_top: g as u64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Not excluded by the degree and `h⁰` tests.
    Feasible,
    InfeasibleEtale,
    InfeasibleH0,
}

impl Feasibility {
    pub fn name(&self) -> &'static str {
        match self {
            Feasibility::Feasible => "Feasible",
            Feasibility::InfeasibleEtale => "InfeasibleEtale",
            Feasibility::InfeasibleH0 => "InfeasibleH0",
        }
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub arith: CurveCoverArithmetic,
    pub rank: u32,
    pub forced_degree: i64,
    pub required_h0: u64,
    pub h0_upper_bound: Option<i64>,
    pub verdict: Feasibility,
    pub narrative: String,
}

/// Necessary conditions for a rank-`r` bundle `E` on the top curve with
/// `π_*E` trivial of rank `r·d`.
pub fn feasibility_report(arith: &CurveCoverArithmetic, rank: u32) -> FeasibilityReport {
    let r = rank.max(1) as i64;
    let d = arith.d as i64;
    let g_b = arith.g_base as i64;
    let g_t = arith.g_top as i64;
    // χ(E) = χ(π_*E) = r·d·(1 − g_base), and χ(E) = deg E + r(1 − g_top).
    let forced_degree = r * d * (1 - g_b) + r * (g_t - 1);
    let required_h0 = (r * d) as u64;
    let mut lines = vec![
        format!(
            "genus {} -> {} under a degree {} cover with branch degree {} (ramification {})",
            arith.g_base, arith.g_top, arith.d, arith.branch_degree, arith.ramification_degree
        ),
        format!("a rank {r} bundle with trivial pushforward has degree {forced_degree} and h0 = {required_h0}"),
    ];
    let (bound, verdict) = if arith.is_etale() && g_b >= 1 {
        lines.push(format!("etale cover: E is semistable of degree 0, so h0(E) <= rank = {r}"));
        let v = if r < required_h0 as i64 { Feasibility::InfeasibleEtale } else { Feasibility::Feasible };
        (Some(r), v)
    } else if r == 1 && (0..=2 * g_t - 2).contains(&forced_degree) {
        // Clifford for special bundles; Riemann-Roch gives deg + 1 − g ≤ deg/2 + 1 otherwise.
        let b = forced_degree / 2 + 1;
        lines.push(format!("line bundle of degree {forced_degree} in [0, 2g - 2]: h0 <= {b}"));
        let v = if b < required_h0 as i64 { Feasibility::InfeasibleH0 } else { Feasibility::Feasible };
        (Some(b), v)
    } else {
        lines.push("no bound applies".to_string());
        (None, Feasibility::Feasible)
    };
    lines.push(match verdict {
        Feasibility::Feasible => "verdict: not excluded".to_string(),
        v => format!("verdict: {v} (bound {} < required {required_h0})", bound.unwrap_or_default()),
    });
    FeasibilityReport {
        arith: arith.clone(),
        rank: r as u32,
        forced_degree,
        required_h0,
        h0_upper_bound: bound,
        verdict,
        narrative: lines.join("\n"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagePlan {
    pub index: usize,
    pub d: u32,
    pub m_deg: u32,
    pub terms: usize,
    pub specialized: bool,
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianPlan {
    pub stages: Vec<StagePlan>,
    pub total_rank: u64,
}

/// Per-stage ranks `d_i^{r_i}` (1 for a specialized double cover) and their
/// product.
pub fn compose_abelian_plan(
    spec: &AbelianCoverSpec,
    terms: &[usize],
    specialize: bool,
) -> Result<AbelianPlan, CoverError> {
    let mut stages = Vec::new();
    for (index, stage) in spec.stages.iter().enumerate() {
        let r = match terms.get(index) {
            Some(&r) if r > 0 => r,
            _ => return Err(CoverError::StageMissingCertificate(index)),
        };
        let specialized = specialize && stage.d == 2 && r == 1;
        let rank = if specialized { 1 } else { (stage.d as u64).pow(r as u32) };
        stages.push(StagePlan { index, d: stage.d, m_deg: stage.m_deg, terms: r, specialized, rank });
    }
    let total_rank = stages.iter().map(|s| s.rank).product();
    Ok(AbelianPlan { stages, total_rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn summand_examples() {
        let cyc = AbelianCoverSpec::from_degrees(&[3]).unwrap();
        assert_eq!(pushforward_summands(&cyc), vec![vec![0], vec![-1], vec![-2]]);
        let klein = AbelianCoverSpec::from_degrees(&[2, 2]).unwrap();
        assert_eq!(pushforward_summands(&klein), vec![vec![0, 0], vec![-1, 0], vec![0, -1], vec![-1, -1]]);
        assert_eq!(pushforward_summands(&AbelianCoverSpec::from_degrees(&[2, 3]).unwrap()).len(), 6);
        assert_eq!(AbelianCoverSpec::from_degrees(&[2, 1]), Err(CoverError::InvalidStage(1)));
        assert_eq!(AbelianCoverSpec::new(vec![]), Err(CoverError::NoStages));
    }

    #[test]
    fn riemann_hurwitz_examples() {
        let a = riemann_hurwitz(1, 2, 2).unwrap();
        assert_eq!(a.g_top, 2);
        assert_eq!(riemann_hurwitz(2, 3, 0).unwrap().g_top, 4);
        assert_eq!(riemann_hurwitz(0, 2, 1), Err(CoverError::NonIntegralGenus(-3)));
        assert_eq!(riemann_hurwitz(0, 3, 0), Err(CoverError::NegativeGenus(-2)));
        assert_eq!(riemann_hurwitz(0, 2, 6).unwrap().g_top, 2);
    }

    #[test]
    fn feasibility_examples() {
        let r = feasibility_report(&riemann_hurwitz(2, 3, 0).unwrap(), 1);
        assert_eq!((r.forced_degree, r.required_h0, r.h0_upper_bound), (0, 3, Some(1)));
        assert_eq!(r.verdict, Feasibility::InfeasibleEtale);

        let r = feasibility_report(&riemann_hurwitz(1, 2, 2).unwrap(), 1);
        assert_eq!((r.forced_degree, r.required_h0, r.h0_upper_bound), (1, 2, Some(1)));
        assert_eq!(r.verdict, Feasibility::InfeasibleH0);
        assert!(r.narrative.contains("InfeasibleH0"));

        let r = feasibility_report(&riemann_hurwitz(0, 2, 4).unwrap(), 1);
        assert_eq!(r.verdict, Feasibility::Feasible);
    }

    #[test]
    fn plans() {
        let klein = AbelianCoverSpec::from_degrees(&[2, 2]).unwrap();
        assert_eq!(compose_abelian_plan(&klein, &[1, 1], true).unwrap().total_rank, 1);
        let mixed = AbelianCoverSpec::from_degrees(&[2, 3]).unwrap();
        assert_eq!(compose_abelian_plan(&mixed, &[2, 1], true).unwrap().total_rank, 12);
        assert_eq!(compose_abelian_plan(&mixed, &[2], true), Err(CoverError::StageMissingCertificate(1)));
        assert_eq!(compose_abelian_plan(&mixed, &[0, 1], true), Err(CoverError::StageMissingCertificate(0)));
        let single = AbelianCoverSpec::from_degrees(&[3]).unwrap();
        assert_eq!(compose_abelian_plan(&single, &[2], true).unwrap().total_rank, 9);
    }

    proptest! {
        #[test]
        fn etale_never_feasible(g in 1u32..20, d in 2u32..9, r in 1u32..6) {
            let a = riemann_hurwitz(g, d, 0).unwrap();
            prop_assert!(a.check_identity());
            let rep = feasibility_report(&a, r);
            prop_assert_eq!(rep.forced_degree, 0);
            prop_assert_eq!(rep.verdict, Feasibility::InfeasibleEtale);
        }

        #[test]
        fn hurwitz_identity(g in 0u32..20, d in 1u32..9, b in 0u32..30) {
            if let Ok(a) = riemann_hurwitz(g, d, b) {
                prop_assert!(a.check_identity());
            }
        }

        #[test]
        fn summand_count(ds in prop::collection::vec(2u32..6, 1..4)) {
            let spec = AbelianCoverSpec::from_degrees(&ds).unwrap();
            let s = pushforward_summands(&spec);
            prop_assert_eq!(s.len() as u64, ds.iter().map(|&d| d as u64).product::<u64>());
            let distinct: std::collections::BTreeSet<_> = s.iter().collect();
            prop_assert_eq!(distinct.len(), s.len());
        }

        #[test]
        fn plan_rank_is_multiplicative(ds in prop::collection::vec(2u32..6, 1..4), rs in prop::collection::vec(1usize..4, 3)) {
            let spec = AbelianCoverSpec::from_degrees(&ds).unwrap();
            let plan = compose_abelian_plan(&spec, &rs, false).unwrap();
            let expected: u64 = ds.iter().zip(&rs).map(|(&d, &r)| (d as u64).pow(r as u32)).product();
            prop_assert_eq!(plan.total_rank, expected);
        }
    }
}
