//! Analysis of the cyclic quotient tower: the census of quotient
//! singularities, the numerical cross-checks relating cover and quotient,
//! base points of the canonical system, factorization of the canonical map
//! through a quotient, exclusion of 3-torsion, and the degree bookkeeping
//! of the canonical image.

use thiserror::Error;

use crate::cover::{
    component_label, cover_section_h0, BuildingDataZ3, BuildingDataZ32, Chi, CoverError, Subgroup,
    Z3Analysis, Z3Side,
};
use crate::linsys::{h0, CfgOptions, ConcreteConfiguration, LinsysError};
use crate::picard::{DivisorClass, PicardError};
use crate::report::{CheckReport, Invariants};

#[derive(Debug, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Lattice(#[from] PicardError),
    #[error(transparent)]
    Oracle(#[from] LinsysError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("branch locus is not normal-crossing: {0}")]
    NonNormalCrossing(String),
    #[error("canonical map does not factor through the chosen quotient")]
    NoFactorization,
}

/// Singularities of the quotient by the residual cyclic action: a cusp
/// (`A_2`) over every double point internal to one branch half, and a
/// one-third point over every crossing of the two halves. Provenance
/// records which component pair produced how many points.
#[derive(Debug, Clone)]
pub struct SingularityCensus {
    /// Number of `A_2` points.
    pub n: i64,
    /// Number of `1/3(1,1)` points.
    pub m: i64,
    pub a2_provenance: Vec<(String, String, i64)>,
    pub onethird_provenance: Vec<(String, String, i64)>,
}

/// Counts the quotient singularities of a `Z_3` cover with normal-crossing
/// branch: internal double points of each half give `A_2` points, crossings
/// of the two halves give `1/3(1,1)` points. Declared special points must
/// be transverse and involve at most two components, otherwise the branch
/// is not normal-crossing.
pub fn singularity_census(data: &BuildingDataZ3) -> Result<SingularityCensus, QuotientError> {
    for (i, sp) in data.specials.iter().enumerate() {
        if !sp.transverse {
            return Err(QuotientError::NonNormalCrossing(format!(
                "special point #{i} is declared tangential"
            )));
        }
        if sp.refs.len() > 2 {
            return Err(QuotientError::NonNormalCrossing(format!(
                "special point #{i} carries {} components",
                sp.refs.len()
            )));
        }
    }

    let label = |side: Z3Side, idx: usize| component_label(&data.side(side)[idx], &data.surface);

    let mut n = 0;
    let mut a2 = Vec::new();
    for side in [Z3Side::D1, Z3Side::D2] {
        let comps = data.side(side);
        for i in 0..comps.len() {
            let ci = comps[i].class_on(&data.surface)?;
            for j in (i + 1)..comps.len() {
                let cj = comps[j].class_on(&data.surface)?;
                let product = ci.intersect(&cj)?;
                if product < 0 {
                    return Err(QuotientError::NonNormalCrossing(format!(
                        "components {} and {} share a common part",
                        label(side, i),
                        label(side, j)
                    )));
                }
                if product > 0 {
                    n += product;
                    a2.push((label(side, i), label(side, j), product));
                }
            }
        }
    }

    let mut m = 0;
    let mut onethird = Vec::new();
    for (i, c1) in data.d1.iter().enumerate() {
        let class1 = c1.class_on(&data.surface)?;
        for (j, c2) in data.d2.iter().enumerate() {
            let class2 = c2.class_on(&data.surface)?;
            let product = class1.intersect(&class2)?;
            if product < 0 {
                return Err(QuotientError::NonNormalCrossing(format!(
                    "components {} and {} share a common part",
                    label(Z3Side::D1, i),
                    label(Z3Side::D2, j)
                )));
            }
            if product > 0 {
                m += product;
                onethird.push((label(Z3Side::D1, i), label(Z3Side::D2, j), product));
            }
        }
    }

    Ok(SingularityCensus {
        n,
        m,
        a2_provenance: a2,
        onethird_provenance: onethird,
    })
}

/// The numerical identities tying the cover to the minimal resolution of
/// its quotient: `K^2` drops by a factor 3 up to the one-third points,
/// `chi(O)` by a factor 3 up to the full census, the census itself matches
/// `6 chi(O)`, and the combination `2n + m` is divisible by 3.
pub fn quotient_crosscheck(
    census: &SingularityCensus,
    cover: &Invariants,
    quotient: &Invariants,
) -> CheckReport {
    let mut report = CheckReport::new();
    let (n, m) = (census.n, census.m);

    let k2_ok = cover.k2 == 3 * quotient.k2 + m;
    report.push(
        "quotient K^2",
        k2_ok,
        format!("{} = 3*{} + {}", cover.k2, quotient.k2, m),
    );

    let chi_ok = 3 * cover.chi == 9 * quotient.chi - (2 * n + m);
    report.push(
        "quotient chi",
        chi_ok,
        format!("{} = 3*{} - (2*{n} + {m})/3", cover.chi, quotient.chi),
    );

    let zset_ok = 2 * n + m == 6 * quotient.chi;
    report.push(
        "census matches 6*chi",
        zset_ok,
        format!("2*{n} + {m} = {}, 6*chi = {}", 2 * n + m, 6 * quotient.chi),
    );

    let div_ok = (2 * n + m) % 3 == 0;
    report.push(
        "census divisible by 3",
        div_ok,
        format!("2n + m = {}", 2 * n + m),
    );

    report
}

/// Base points of the canonical system of the cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasePoints {
    /// The geometric genus descends, so each one-third point contributes
    /// one base point.
    Count(i64),
    /// The hypothesis `p_g(cover) = p_g(quotient resolution)` fails, so
    /// the count is not determined by this argument.
    Indeterminate,
}

pub fn base_point_count(pg_cover: u64, pg_quotient: u64, m: i64) -> BasePoints {
    if pg_cover == pg_quotient {
        BasePoints::Count(m)
    } else {
        BasePoints::Indeterminate
    }
}

/// Result of the factorization test for a subgroup.
#[derive(Debug, Clone)]
pub struct FactorizationCheck {
    pub subgroup: Subgroup,
    pub holds: bool,
    /// `h0(K + L_chi)` for every character not vanishing on the subgroup.
    pub section_dims: Vec<(Chi, u64)>,
}

/// The canonical map factors through the quotient by `gamma` exactly when
/// every adjoint bundle outside the annihilator of `gamma` has no
/// sections.
pub fn factorization_check(
    data: &BuildingDataZ32,
    gamma: Subgroup,
    cfg: &ConcreteConfiguration,
    opts: &CfgOptions,
) -> Result<FactorizationCheck, QuotientError> {
    let perp = gamma.perp();
    let k = data.surface.canonical_class();
    let mut section_dims = Vec::new();
    let mut holds = true;
    for chi in Chi::all() {
        if perp.contains(&chi) {
            continue;
        }
        let adjoint = data.bundles[&chi].checked_add(&k)?;
        let dim = h0(&adjoint, cfg, opts.trials)?;
        if dim != 0 {
            holds = false;
        }
        section_dims.push((chi, dim));
    }
    Ok(FactorizationCheck {
        subgroup: gamma,
        holds,
        section_dims,
    })
}

/// A degree-3 unramified cover built from nontrivial 3-torsion would have
/// `(3K^2, 3chi)`; the quotient surface carries no such torsion exactly
/// when those values violate the Noether inequality `K^2 >= 2chi - 6`.
pub fn torsion_check(k2: i64, chi: i64) -> bool {
    3 * k2 < 2 * (3 * chi) - 6
}

/// Canonical-map bookkeeping for the quotient tower.
#[derive(Debug, Clone)]
pub struct CanonicalReport {
    /// Degree of the canonical map of the cover: 3 onto the canonical
    /// image of the quotient resolution.
    pub deg_phi: u64,
    /// Degree of the canonical image, `K^2` of the quotient resolution
    /// under the recorded birationality assumption.
    pub deg_sigma: i64,
    pub base_points: BasePoints,
    pub factorization_subgroup: Subgroup,
    /// Birationality of the quotient's canonical map is an assumption
    /// supported by the section counts below, not a computed fact.
    pub birationality_assumed: bool,
    /// Sections of the pullback of the moving summand on the cover.
    pub moving_sections: u64,
    pub checks: CheckReport,
}

/// Assembles the canonical report. `summand` is the class on the
/// transported base whose pullback is the moving part of the canonical
/// decomposition; the fixed residue must be the branch half `D_2`, square
/// `-6`, orthogonal to the descent class — together these certify that the
/// residue descends from a single (-2)-curve on the quotient resolution.
#[allow(clippy::too_many_arguments)]
pub fn canonical_report(
    data: &BuildingDataZ3,
    analysis: &Z3Analysis,
    pg_cover: u64,
    census: &SingularityCensus,
    gamma: Subgroup,
    factorization_holds: bool,
    summand: &DivisorClass,
    cfg: &ConcreteConfiguration,
    opts: &CfgOptions,
) -> Result<CanonicalReport, QuotientError> {
    if !factorization_holds {
        return Err(QuotientError::NoFactorization);
    }
    let mut checks = CheckReport::new();

    let residue = analysis.descent.checked_sub(&summand.scaled(3))?;
    let d2_class = data.side_class(Z3Side::D2)?;
    let resid_ok = residue == d2_class;
    checks.push(
        "canonical residue is the branch half",
        resid_ok,
        format!("residue {residue}, strict D2 {d2_class}"),
    );
    let sq = residue.self_intersection();
    checks.push(
        "residue square",
        sq == -6,
        format!("residue^2 = {sq}, expected -6 (a (-2)-curve upstairs)"),
    );
    let pairing = residue.intersect(&analysis.descent)?;
    checks.push(
        "residue orthogonal to the canonical class",
        pairing == 0,
        format!("residue . descent = {pairing}"),
    );

    let moving_sections = cover_section_h0(summand, data, cfg, opts)?;
    let pg_quotient = analysis.invariants.pg;
    checks.push(
        "moving part does not exhaust the canonical sections",
        moving_sections != pg_quotient,
        format!("h0(moving pullback) = {moving_sections}, p_g = {pg_quotient}"),
    );

    Ok(CanonicalReport {
        deg_phi: 3,
        deg_sigma: analysis.invariants.k2,
        base_points: base_point_count(pg_cover, pg_quotient, census.m),
        factorization_subgroup: gamma,
        birationality_assumed: true,
        moving_sections,
        checks,
    })
}
