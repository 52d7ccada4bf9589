//! Building data for the two kinds of triple covers used here: covers with
//! group `Z_3 x Z_3` described by eight branch divisors `D_sigma` and
//! eight bundle classes `L_chi`, and plain `Z_3` covers described by
//! `D_1, D_2, L_1, L_2`. The module verifies the defining relations,
//! checks smoothness of the total space from the declared incidences,
//! computes numerical invariants, extracts intermediate quotients and
//! transports data through blow-ups, including the two recipes that
//! resolve an imposed ordinary triple point of the branch locus.

pub mod arrangement;
pub mod group;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::linsys::{
    h0, is_nef_big, negative_curve_catalog, sample_configuration, CfgOptions,
    ConcreteConfiguration, LinsysError,
};
use crate::picard::{BlowupSurface, DivisorClass, PicardError, TangentTag};
use crate::report::{CheckReport, Invariants};

pub use arrangement::{component_label, ComponentId, SpecialPoint};
pub use group::{
    derive_reduced_relations, epsilon, relation_coefficient, restriction_exponent, Chi, GroupError,
    Sigma, Subgroup,
};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error(transparent)]
    Lattice(#[from] PicardError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Oracle(#[from] LinsysError),
    #[error("building data is invalid: {0}")]
    InvalidData(String),
    #[error("the declared arrangement is inconsistent with the lattice: {0}")]
    ArrangementInconsistent(String),
    #[error("relation {0} fails after transport")]
    TransportRelationFailure(String),
    #[error("quotient grouping does not satisfy the reduced relations: {0}")]
    UnsupportedGrouping(String),
    #[error("no exceptional assignment restores the relations at the blown-up point")]
    NoRestoringAssignment,
    #[error("the declared triple-point case does not match the data: {0}")]
    CaseMismatch(String),
    #[error("triple-point resolution left the data invalid: {0}")]
    ResolutionFailed(String),
    #[error("unsupported transport geometry: {0}")]
    UnsupportedTransport(String),
}

/// Building data of a `Z_3 x Z_3` cover: branch components per nonzero
/// group element and one bundle class per nontrivial character, plus the
/// declared special points of the branch arrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingDataZ32 {
    pub surface: BlowupSurface,
    pub branch: BTreeMap<Sigma, Vec<ComponentId>>,
    pub bundles: BTreeMap<Chi, DivisorClass>,
    pub specials: Vec<SpecialPoint>,
}

impl BuildingDataZ32 {
    pub fn new(
        surface: BlowupSurface,
        branch: BTreeMap<Sigma, Vec<ComponentId>>,
        bundles: BTreeMap<Chi, DivisorClass>,
        specials: Vec<SpecialPoint>,
    ) -> Result<Self, CoverError> {
        let data = BuildingDataZ32 {
            surface,
            branch,
            bundles,
            specials,
        };
        data.validate_shape()?;
        Ok(data)
    }

    fn validate_shape(&self) -> Result<(), CoverError> {
        for chi in Chi::all() {
            let class = self
                .bundles
                .get(&chi)
                .ok_or_else(|| CoverError::InvalidData(format!("missing bundle class {chi}")))?;
            if class.multiplicities().len() != self.surface.point_count() {
                return Err(CoverError::InvalidData(format!(
                    "bundle {chi} has the wrong number of coordinates"
                )));
            }
        }
        for (sigma, comps) in &self.branch {
            for comp in comps {
                comp.class_on(&self.surface).map_err(|e| {
                    CoverError::InvalidData(format!("component {comp} of {sigma}: {e}"))
                })?;
            }
        }
        for (i, sp) in self.specials.iter().enumerate() {
            if sp.refs.len() < 2 {
                return Err(CoverError::InvalidData(format!(
                    "special point #{i} references fewer than two components"
                )));
            }
            for &(sigma, idx) in &sp.refs {
                if self.components(sigma).len() <= idx {
                    return Err(CoverError::InvalidData(format!(
                        "special point #{i} references a missing component of {sigma}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn components(&self, sigma: Sigma) -> &[ComponentId] {
        self.branch.get(&sigma).map_or(&[], Vec::as_slice)
    }

    /// Divisor class of `D_sigma` (zero class when empty).
    pub fn branch_class(&self, sigma: Sigma) -> Result<DivisorClass, CoverError> {
        let mut acc = self.surface.zero();
        for comp in self.components(sigma) {
            acc = acc.checked_add(&comp.class_on(&self.surface)?)?;
        }
        Ok(acc)
    }

    /// Total branch class `sum_sigma D_sigma`.
    pub fn total_branch_class(&self) -> Result<DivisorClass, CoverError> {
        let mut acc = self.surface.zero();
        for sigma in Sigma::all() {
            acc = acc.checked_add(&self.branch_class(sigma)?)?;
        }
        Ok(acc)
    }

    /// All components with their group labels.
    pub fn all_components(&self) -> Vec<(Sigma, ComponentId)> {
        Sigma::all()
            .into_iter()
            .flat_map(|s| self.components(s).iter().cloned().map(move |c| (s, c)))
            .collect()
    }

    /// Descent class `M = 3K + 2 sum D_sigma`, the class on the base with
    /// `3K_X = f^* M`.
    pub fn descent_class(&self) -> Result<DivisorClass, CoverError> {
        let k = self.surface.canonical_class();
        Ok(k.scaled(3)
            .checked_add(&self.total_branch_class()?.scaled(2))?)
    }
}

/// Checks the eight reduced relations, reducedness of the total branch
/// divisor and nontriviality of every bundle class. Failures are report
/// entries, not errors.
pub fn verify_building_data(data: &BuildingDataZ32) -> Result<CheckReport, CoverError> {
    let mut report = CheckReport::new();

    for chi in Chi::all() {
        let (a, b) = chi.parts();
        let mut rhs = data.surface.zero();
        for sigma in Sigma::all() {
            let coeff = relation_coefficient(chi, sigma);
            if coeff != 0 {
                rhs = rhs.checked_add(&data.branch_class(sigma)?.scaled(coeff))?;
            }
        }
        let lhs = data.bundles[&chi].scaled(3);
        let passed = lhs == rhs;
        report.push(
            format!("relation 3L{a}{b}"),
            passed,
            if passed {
                String::new()
            } else {
                format!("3L{a}{b} = {lhs} but the branch side sums to {rhs}")
            },
        );
    }

    let mut seen: BTreeSet<&ComponentId> = BTreeSet::new();
    let mut duplicate = None;
    for sigma in Sigma::all() {
        for comp in data.components(sigma) {
            if !seen.insert(comp) {
                duplicate = Some(comp.to_string());
            }
        }
    }
    report.push(
        "branch reduced",
        duplicate.is_none(),
        duplicate.map_or(String::new(), |c| format!("component {c} appears twice")),
    );

    let trivial: Vec<String> = Chi::all()
        .into_iter()
        .filter(|chi| data.bundles[chi].is_zero())
        .map(|chi| chi.to_string())
        .collect();
    report.push(
        "bundles nontrivial",
        trivial.is_empty(),
        if trivial.is_empty() {
            String::new()
        } else {
            format!("trivial classes: {}", trivial.join(", "))
        },
    );

    Ok(report)
}

/// Why the cover fails to be smooth over some point of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    TooManyComponents(usize),
    Tangential,
    SameInertia,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub kind: ViolationKind,
    /// Index of the declared special point at fault, if any; residual
    /// intersections carry `None`.
    pub special: Option<usize>,
}

/// Smoothness of the total space over every point of the base: points on
/// one smooth component are fine, points on two components need a
/// transverse crossing and distinct inertia groups, anything else is a
/// violation. Residual intersections (lattice intersection number minus
/// declared special-point multiplicities) are simple and transverse at
/// general points by convention, so only their inertia can offend.
pub fn check_smoothness(data: &BuildingDataZ32) -> Result<Vec<Violation>, CoverError> {
    let comps = data.all_components();
    let classes: Vec<DivisorClass> = comps
        .iter()
        .map(|(_, c)| c.class_on(&data.surface))
        .collect::<Result<_, _>>()?;
    let mut violations = Vec::new();

    let index_of = |sigma: Sigma, idx: usize| -> usize {
        let mut pos = 0;
        for s in Sigma::all() {
            if s == sigma {
                return pos + idx;
            }
            pos += data.components(s).len();
        }
        unreachable!("validated reference")
    };

    // declared local multiplicities per unordered component pair
    let mut declared: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (pi, sp) in data.specials.iter().enumerate() {
        let ids: Vec<usize> = sp.refs.iter().map(|&(s, i)| index_of(s, i)).collect();
        let local = if sp.transverse { 1 } else { 2 };
        for (u, &a) in ids.iter().enumerate() {
            for &b in ids.iter().skip(u + 1) {
                let key = (a.min(b), a.max(b));
                *declared.entry(key).or_insert(0) += local;
            }
        }

        let location = format!(
            "special point #{pi} on {}",
            ids.iter()
                .map(|&i| component_label(&comps[i].1, &data.surface))
                .collect::<Vec<_>>()
                .join(", ")
        );
        if ids.len() >= 3 {
            violations.push(Violation {
                location: location.clone(),
                kind: ViolationKind::TooManyComponents(ids.len()),
                special: Some(pi),
            });
        } else if !sp.transverse {
            violations.push(Violation {
                location: location.clone(),
                kind: ViolationKind::Tangential,
                special: Some(pi),
            });
        } else {
            let (a, b) = (ids[0], ids[1]);
            if comps[a].0.subgroup() == comps[b].0.subgroup() {
                violations.push(Violation {
                    location,
                    kind: ViolationKind::SameInertia,
                    special: Some(pi),
                });
            }
        }
    }

    for a in 0..comps.len() {
        for b in (a + 1)..comps.len() {
            let product = classes[a].intersect(&classes[b])?;
            let local = declared.get(&(a, b)).copied().unwrap_or(0);
            if product < local {
                return Err(CoverError::ArrangementInconsistent(format!(
                    "{} and {} meet with total multiplicity {product} but the arrangement declares {local}",
                    component_label(&comps[a].1, &data.surface),
                    component_label(&comps[b].1, &data.surface),
                )));
            }
            let residual = product - local;
            if residual > 0 && comps[a].0.subgroup() == comps[b].0.subgroup() {
                violations.push(Violation {
                    location: format!(
                        "residual intersection of {} and {}",
                        component_label(&comps[a].1, &data.surface),
                        component_label(&comps[b].1, &data.surface),
                    ),
                    kind: ViolationKind::SameInertia,
                    special: None,
                });
            }
        }
    }

    Ok(violations)
}

/// Outcome of the invariant computation for a `Z_3 x Z_3` cover.
#[derive(Debug, Clone)]
pub struct Z32Analysis {
    pub invariants: Invariants,
    pub descent: DivisorClass,
    pub descent_nef: bool,
    pub descent_big: bool,
    /// `h0(L_chi + K)` per character, the summands of `p_g`.
    pub section_dims: BTreeMap<Chi, u64>,
}

/// Invariants of the smooth cover: `K^2` as the square of the descent
/// class, `p_g` from the character decomposition of the canonical
/// sections, `chi(O)` from the bundle classes, `q` by Noether's relation.
/// The base is a rational surface, so `p_g(Y) = q(Y) = 0` and
/// `chi(O_Y) = 1`.
pub fn z32_invariants(
    data: &BuildingDataZ32,
    cfg: &ConcreteConfiguration,
    opts: &CfgOptions,
) -> Result<Z32Analysis, CoverError> {
    let k = data.surface.canonical_class();
    let descent = data.descent_class()?;
    let k2 = descent.self_intersection();

    let mut pg: u64 = 0;
    let mut section_dims = BTreeMap::new();
    let mut chi_sum: i64 = 0;
    for chi in Chi::all() {
        let l = &data.bundles[&chi];
        let adjoint = l.checked_add(&k)?;
        let dim = h0(&adjoint, cfg, opts.trials)?;
        pg += dim;
        section_dims.insert(chi, dim);
        let pairing = adjoint.intersect(l)?;
        debug_assert!(pairing % 2 == 0, "adjunction parity");
        chi_sum += pairing / 2;
    }
    let chi_o = 9 + chi_sum;
    let q = 1 + pg as i64 - chi_o;

    let catalog = negative_curve_catalog(cfg, opts.trials)?;
    let flags = is_nef_big(&descent, &catalog)?;

    Ok(Z32Analysis {
        invariants: Invariants {
            k2,
            pg,
            chi: chi_o,
            q,
        },
        descent,
        descent_nef: flags.nef,
        descent_big: flags.big,
        section_dims,
    })
}

/// Topological Euler number of the smooth cover, by counting fibers over
/// the strata of the base: 9 sheets off the branch, 3 over its smooth
/// points, 1 over each crossing. Valid once `check_smoothness` passes,
/// since every component here is a rational curve and every crossing is
/// then a simple double point:
/// `e(X) = 9 e(Y) - 12 #components + 4 #crossings`.
pub fn euler_number(data: &BuildingDataZ32) -> Result<i64, CoverError> {
    let comps = data.all_components();
    let classes: Vec<DivisorClass> = comps
        .iter()
        .map(|(_, c)| c.class_on(&data.surface))
        .collect::<Result<_, _>>()?;
    let mut crossings = 0i64;
    for (i, a) in classes.iter().enumerate() {
        for b in classes.iter().skip(i + 1) {
            crossings += a.intersect(b)?;
        }
    }
    let e_base = 3 + data.surface.point_count() as i64;
    Ok(9 * e_base - 12 * comps.len() as i64 + 4 * crossings)
}

/// Which side of a `Z_3` branch datum a component belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Z3Side {
    D1,
    D2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPointZ3 {
    pub refs: Vec<(Z3Side, usize)>,
    pub transverse: bool,
}

/// Building data of a `Z_3` cover: `3L_1 = D_1 + 2D_2` and
/// `3L_2 = 2D_1 + D_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingDataZ3 {
    pub surface: BlowupSurface,
    pub d1: Vec<ComponentId>,
    pub d2: Vec<ComponentId>,
    pub l1: DivisorClass,
    pub l2: DivisorClass,
    pub specials: Vec<SpecialPointZ3>,
}

impl BuildingDataZ3 {
    pub fn side(&self, side: Z3Side) -> &[ComponentId] {
        match side {
            Z3Side::D1 => &self.d1,
            Z3Side::D2 => &self.d2,
        }
    }

    pub fn side_class(&self, side: Z3Side) -> Result<DivisorClass, CoverError> {
        let mut acc = self.surface.zero();
        for comp in self.side(side) {
            acc = acc.checked_add(&comp.class_on(&self.surface)?)?;
        }
        Ok(acc)
    }

    /// Descent class of `3K` on the base.
    pub fn descent_class(&self) -> Result<DivisorClass, CoverError> {
        let k = self.surface.canonical_class().scaled(3);
        let b = self
            .side_class(Z3Side::D1)?
            .checked_add(&self.side_class(Z3Side::D2)?)?;
        Ok(k.checked_add(&b.scaled(2))?)
    }

    /// The two defining relations as a report.
    pub fn verify(&self) -> Result<CheckReport, CoverError> {
        let mut report = CheckReport::new();
        let d1 = self.side_class(Z3Side::D1)?;
        let d2 = self.side_class(Z3Side::D2)?;
        let r1 = d1.checked_add(&d2.scaled(2))?;
        let r2 = d1.scaled(2).checked_add(&d2)?;
        let ok1 = self.l1.scaled(3) == r1;
        let ok2 = self.l2.scaled(3) == r2;
        report.push(
            "relation 3L1",
            ok1,
            if ok1 {
                String::new()
            } else {
                format!("3L1 = {} but D1 + 2D2 = {r1}", self.l1.scaled(3))
            },
        );
        report.push(
            "relation 3L2",
            ok2,
            if ok2 {
                String::new()
            } else {
                format!("3L2 = {} but 2D1 + D2 = {r2}", self.l2.scaled(3))
            },
        );
        report.push(
            "bundles nontrivial",
            !self.l1.is_zero() && !self.l2.is_zero(),
            String::new(),
        );
        Ok(report)
    }
}

#[derive(Debug, Clone)]
pub struct Z3Analysis {
    pub invariants: Invariants,
    pub descent: DivisorClass,
}

/// Invariants of the (minimal resolution of the) `Z_3` cover. `K^2` comes
/// from the descent class, whose square is three times the cover's; `p_g`
/// and `chi(O)` come from the bundle classes. These values are those of
/// the minimal resolution whenever the branch has at worst the allowed
/// normal crossings, which the census validates separately.
pub fn z3_invariants(
    data: &BuildingDataZ3,
    cfg: &ConcreteConfiguration,
    opts: &CfgOptions,
) -> Result<Z3Analysis, CoverError> {
    let report = data.verify()?;
    if let Some(fail) = report.first_failure() {
        return Err(CoverError::InvalidData(format!(
            "{} fails: {}",
            fail.name, fail.detail
        )));
    }
    if data.l1.is_zero() || data.l2.is_zero() {
        return Err(CoverError::InvalidData(
            "trivial bundle class: the cover degenerates".into(),
        ));
    }

    let k = data.surface.canonical_class();
    let descent = data.descent_class()?;
    let square = descent.self_intersection();
    if square % 3 != 0 {
        return Err(CoverError::InvalidData(format!(
            "descent class square {square} is not divisible by 3"
        )));
    }
    let k2 = square / 3;

    let a1 = data.l1.checked_add(&k)?;
    let a2 = data.l2.checked_add(&k)?;
    let pg = h0(&a1, cfg, opts.trials)? + h0(&a2, cfg, opts.trials)?;
    let p1 = data.l1.intersect(&a1)?;
    let p2 = data.l2.intersect(&a2)?;
    debug_assert!((p1 + p2) % 2 == 0);
    let chi_o = 3 + (p1 + p2) / 2;
    let q = 1 + pg as i64 - chi_o;

    Ok(Z3Analysis {
        invariants: Invariants {
            k2,
            pg,
            chi: chi_o,
            q,
        },
        descent,
    })
}

/// Extracts the intermediate quotient by a cyclic subgroup `Gamma` as a
/// `Z_3` cover of the base. The bundle classes are the two nontrivial
/// characters vanishing on `Gamma`; a branch component of `D_sigma`,
/// `sigma` outside `Gamma`, lands on the side given by the coefficient of
/// `D_sigma` in the relation for the chosen character: coefficient 1 goes
/// to `D_1`, coefficient 2 to `D_2`.
pub fn extract_z3_subcover(
    data: &BuildingDataZ32,
    gamma: Subgroup,
) -> Result<BuildingDataZ3, CoverError> {
    let perp = gamma.perp();
    debug_assert_eq!(perp.len(), 2);
    let chi0 = perp[0];
    let l1 = data.bundles[&chi0].clone();
    let l2 = data.bundles[&chi0.square()].clone();

    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    let mut side_of: BTreeMap<(Sigma, usize), (Z3Side, usize)> = BTreeMap::new();
    for sigma in Sigma::all() {
        if gamma.contains(sigma) {
            if !data.components(sigma).is_empty() {
                return Err(CoverError::UnsupportedGrouping(format!(
                    "{sigma} has inertia inside {gamma}; such components do not descend"
                )));
            }
            continue;
        }
        let coeff = relation_coefficient(chi0, sigma);
        for (idx, comp) in data.components(sigma).iter().enumerate() {
            match coeff {
                1 => {
                    side_of.insert((sigma, idx), (Z3Side::D1, d1.len()));
                    d1.push(comp.clone());
                }
                2 => {
                    side_of.insert((sigma, idx), (Z3Side::D2, d2.len()));
                    d2.push(comp.clone());
                }
                other => {
                    return Err(CoverError::UnsupportedGrouping(format!(
                        "coefficient {other} of {sigma} in the chosen relation"
                    )))
                }
            }
        }
    }

    let mut specials = Vec::new();
    for sp in &data.specials {
        let refs: Option<Vec<(Z3Side, usize)>> = sp
            .refs
            .iter()
            .map(|key| side_of.get(key).copied())
            .collect();
        match refs {
            Some(refs) => specials.push(SpecialPointZ3 {
                refs,
                transverse: sp.transverse,
            }),
            None => {
                return Err(CoverError::UnsupportedGrouping(
                    "a special point references components that do not descend".into(),
                ))
            }
        }
    }

    let out = BuildingDataZ3 {
        surface: data.surface.clone(),
        d1,
        d2,
        l1,
        l2,
        specials,
    };
    let report = out.verify()?;
    if let Some(fail) = report.first_failure() {
        return Err(CoverError::UnsupportedGrouping(format!(
            "{}: {}",
            fail.name, fail.detail
        )));
    }
    Ok(out)
}

/// One transverse intersection point of a `D_1` component with a `D_2`
/// component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingPoint {
    pub d1_index: usize,
    pub d2_index: usize,
}

/// All transverse `D_1 . D_2` intersection points, each pair listed with
/// its full lattice multiplicity. Requires the arrangement to declare no
/// special point across the two sides.
pub fn crossing_points(data: &BuildingDataZ3) -> Result<Vec<CrossingPoint>, CoverError> {
    for sp in &data.specials {
        let sides: BTreeSet<Z3Side> = sp.refs.iter().map(|&(s, _)| s).collect();
        if sides.len() > 1 {
            return Err(CoverError::UnsupportedTransport(
                "declared special points across D1 and D2 are not supported".into(),
            ));
        }
    }
    let mut points = Vec::new();
    for (i, c1) in data.d1.iter().enumerate() {
        let class1 = c1.class_on(&data.surface)?;
        for (j, c2) in data.d2.iter().enumerate() {
            let class2 = c2.class_on(&data.surface)?;
            let product = class1.intersect(&class2)?;
            if product < 0 {
                return Err(CoverError::InvalidData(format!(
                    "components {c1} and {c2} have negative intersection {product}"
                )));
            }
            for _ in 0..product {
                points.push(CrossingPoint {
                    d1_index: i,
                    d2_index: j,
                });
            }
        }
    }
    Ok(points)
}

/// Transports the `Z_3` data through the blow-up of the given crossing
/// points: components become their strict transforms and the bundle
/// classes drop one copy of each new exceptional. The input points must be
/// exactly the transverse crossings.
pub fn blow_up_transport(
    data: &BuildingDataZ3,
    points: &[CrossingPoint],
) -> Result<BuildingDataZ3, CoverError> {
    let mut expected = crossing_points(data)?;
    let mut given: Vec<CrossingPoint> = points.to_vec();
    expected.sort_by_key(|p| (p.d1_index, p.d2_index));
    given.sort_by_key(|p| (p.d1_index, p.d2_index));
    if expected != given {
        return Err(CoverError::UnsupportedTransport(format!(
            "the given {} points are not exactly the transverse crossings ({} expected)",
            given.len(),
            expected.len()
        )));
    }

    let mut out = data.clone();
    for point in points {
        let c1 = out.d1[point.d1_index].clone();
        let c2 = out.d2[point.d2_index].clone();
        let new_index = match (&c1, &c2) {
            (ComponentId::Curve { .. }, ComponentId::Curve { .. }) => out.surface.push_proper(),
            (ComponentId::ExcCurve { point: q }, ComponentId::Curve { through, .. })
            | (ComponentId::Curve { through, .. }, ComponentId::ExcCurve { point: q }) => {
                if !through.contains(q) {
                    return Err(CoverError::UnsupportedTransport(format!(
                        "crossing of {c1} and {c2} lies on an exceptional curve but the other \
                         component is not constrained through its point"
                    )));
                }
                let anchor = through.iter().copied().find(|p| p != q);
                let tag = match anchor {
                    Some(a) => TangentTag::Toward(a),
                    None => TangentTag::Generic,
                };
                out.surface.push_infinitely_near(*q, tag)?
            }
            (ComponentId::ExcCurve { .. }, ComponentId::ExcCurve { .. }) => {
                return Err(CoverError::UnsupportedTransport(
                    "crossing of two exceptional curves".into(),
                ))
            }
        };
        // strict transforms: proper crossings constrain both curves
        // through the new point; crossings on an exceptional curve are
        // recorded by the surface itself via the tangent tag
        if matches!(
            out.surface.points()[new_index],
            crate::picard::PointKind::Proper
        ) {
            out.d1[point.d1_index].constrain_through(new_index);
            out.d2[point.d2_index].constrain_through(new_index);
            for id in [&out.d1[point.d1_index], &out.d2[point.d2_index]] {
                if let ComponentId::Curve { through, .. } = id {
                    out.surface.ensure_collinear(through)?;
                }
            }
        }
        let e_new = out.surface.exceptional(new_index)?;
        out.l1 = pad(&out.l1, out.surface.point_count()).checked_sub(&e_new)?;
        out.l2 = pad(&out.l2, out.surface.point_count()).checked_sub(&e_new)?;
    }

    let report = out.verify()?;
    if let Some(fail) = report.first_failure() {
        return Err(CoverError::TransportRelationFailure(format!(
            "{}: {}",
            fail.name, fail.detail
        )));
    }
    Ok(out)
}

fn pad(class: &DivisorClass, len: usize) -> DivisorClass {
    let mut m = class.multiplicities().to_vec();
    m.resize(len, 0);
    DivisorClass::new(class.degree(), m)
}

/// The two resolution recipes for an imposed ordinary triple point of the
/// branch locus, distinguished by the coefficients of the three incident
/// divisors in the relation for `3L01`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriplePointCase {
    /// Not all three coefficients agree: blow up once, add the
    /// exceptional curve to the unique divisor restoring the relations,
    /// then blow up its crossing with the same-inertia partner.
    DistinctCoefficients,
    /// All three coefficients agree: a single blow-up, the exceptional
    /// curve stays out of the branch.
    EqualCoefficients,
}

/// Resolves one declared triple point and returns the transported data on
/// the blown-up surface. The point must have exactly three pairwise
/// transverse components with pairwise distinct inertia groups.
pub fn resolve_triple_point(
    data: &BuildingDataZ32,
    special_index: usize,
    case: TriplePointCase,
) -> Result<BuildingDataZ32, CoverError> {
    let sp = data
        .specials
        .get(special_index)
        .ok_or_else(|| CoverError::InvalidData(format!("no special point #{special_index}")))?
        .clone();
    if sp.refs.len() != 3 {
        return Err(CoverError::InvalidData(format!(
            "triple-point resolution needs exactly 3 components, found {}",
            sp.refs.len()
        )));
    }
    if !sp.transverse {
        return Err(CoverError::InvalidData(
            "triple-point resolution needs transverse components".into(),
        ));
    }
    let sigmas: Vec<Sigma> = sp.refs.iter().map(|&(s, _)| s).collect();
    let subgroups: BTreeSet<Subgroup> = sigmas.iter().map(|s| s.subgroup()).collect();
    if subgroups.len() != 3 {
        return Err(CoverError::InvalidData(
            "the three components must have pairwise distinct inertia groups".into(),
        ));
    }
    for &(sigma, idx) in &sp.refs {
        if !matches!(data.components(sigma)[idx], ComponentId::Curve { .. }) {
            return Err(CoverError::InvalidData(
                "triple points on exceptional curves are not supported".into(),
            ));
        }
    }

    // case tag must match the coefficient pattern in the 3L01 row
    let chi01 = Chi::new(0, 1).expect("nonzero");
    let coeffs: Vec<i64> = sigmas
        .iter()
        .map(|&s| relation_coefficient(chi01, s))
        .collect();
    let all_equal = coeffs.windows(2).all(|w| w[0] == w[1]);
    match (case, all_equal) {
        (TriplePointCase::EqualCoefficients, false) => {
            return Err(CoverError::CaseMismatch(format!(
                "coefficients {coeffs:?} in 3L01 are not all equal"
            )))
        }
        (TriplePointCase::DistinctCoefficients, true) => {
            return Err(CoverError::CaseMismatch(format!(
                "coefficients {coeffs:?} in 3L01 are all equal"
            )))
        }
        _ => {}
    }

    // the unique exceptional assignment restoring every relation: the new
    // exceptional joins D_tau (or no divisor) so that each row's
    // exceptional coefficient stays divisible by 3
    let deficit: Vec<i64> = Chi::all()
        .into_iter()
        .map(|chi| sigmas.iter().map(|&s| relation_coefficient(chi, s)).sum())
        .collect();
    let mut restoring: Vec<Option<Sigma>> = Vec::new();
    if deficit.iter().all(|d| d % 3 == 0) {
        restoring.push(None);
    }
    for tau in Sigma::all() {
        let ok = Chi::all()
            .into_iter()
            .zip(&deficit)
            .all(|(chi, d)| (relation_coefficient(chi, tau) - d).rem_euclid(3) == 0);
        if ok {
            restoring.push(Some(tau));
        }
    }
    if restoring.len() > 1 {
        return Err(CoverError::InvalidData(
            "ambiguous exceptional assignment".into(),
        ));
    }
    let tau = restoring.pop().ok_or(CoverError::NoRestoringAssignment)?;
    match (case, tau) {
        (TriplePointCase::EqualCoefficients, Some(t)) => {
            return Err(CoverError::CaseMismatch(format!(
                "equal coefficients but the relations demand the exceptional in {t}"
            )))
        }
        (TriplePointCase::DistinctCoefficients, None) => {
            return Err(CoverError::CaseMismatch(
                "distinct coefficients but the exceptional must stay out of the branch".into(),
            ))
        }
        _ => {}
    }

    let mut out = data.clone();
    out.specials.remove(special_index);
    let p_new = out.surface.push_proper();
    for &(sigma, idx) in &sp.refs {
        let comp = &mut out.branch.get_mut(&sigma).expect("validated")[idx];
        comp.constrain_through(p_new);
        if let ComponentId::Curve { through, .. } = comp {
            let through = through.clone();
            out.surface.ensure_collinear(&through)?;
        }
    }
    let e_new = out.surface.exceptional(p_new)?;
    let n = out.surface.point_count();
    for (chi, d) in Chi::all().into_iter().zip(&deficit) {
        let coeff_tau = tau.map_or(0, |t| relation_coefficient(chi, t));
        let k = (coeff_tau - d) / 3;
        let adjusted = pad(&out.bundles[&chi], n).checked_add(&e_new.scaled(k))?;
        out.bundles.insert(chi, adjusted);
    }

    if let Some(tau) = tau {
        out.branch
            .entry(tau)
            .or_default()
            .push(ComponentId::exceptional(p_new));

        // the new exceptional meets the strict transform of the component
        // with the same inertia group; blow up their crossing
        let partner = sp
            .refs
            .iter()
            .find(|&&(s, _)| s.subgroup() == tau.subgroup())
            .copied();
        if let Some((psigma, pidx)) = partner {
            let partner_id = out.components(psigma)[pidx].clone();
            let ComponentId::Curve { through, .. } = &partner_id else {
                return Err(CoverError::ResolutionFailed(
                    "same-inertia partner is not a curve".into(),
                ));
            };
            let anchor = through.iter().copied().find(|&p| p != p_new);
            let tag = match anchor {
                Some(a) => TangentTag::Toward(a),
                None => TangentTag::Generic,
            };
            let q_new = out.surface.push_infinitely_near(p_new, tag)?;
            let e_q = out.surface.exceptional(q_new)?;
            let n = out.surface.point_count();
            for chi in Chi::all() {
                let drop = (relation_coefficient(chi, tau) + relation_coefficient(chi, psigma)) / 3;
                let adjusted = pad(&out.bundles[&chi], n).checked_sub(&e_q.scaled(drop))?;
                out.bundles.insert(chi, adjusted);
            }
        }
    }

    let report = verify_building_data(&out)?;
    if let Some(fail) = report.first_failure() {
        return Err(CoverError::ResolutionFailed(format!(
            "{}: {}",
            fail.name, fail.detail
        )));
    }
    // violations at still-declared special points await their own
    // resolution; anything else means this resolution failed
    let violations = check_smoothness(&out)?;
    if let Some(v) = violations.iter().find(|v| v.special.is_none()) {
        return Err(CoverError::ResolutionFailed(format!(
            "smoothness violation remains at {}",
            v.location
        )));
    }
    Ok(out)
}

/// `h0` of the pullback of a base class to the `Z_3` cover:
/// the invariant summand plus the two character twists.
pub fn cover_section_h0(
    class: &DivisorClass,
    data: &BuildingDataZ3,
    cfg: &ConcreteConfiguration,
    opts: &CfgOptions,
) -> Result<u64, CoverError> {
    let mut total = h0(class, cfg, opts.trials)?;
    total += h0(&class.checked_sub(&data.l1)?, cfg, opts.trials)?;
    total += h0(&class.checked_sub(&data.l2)?, cfg, opts.trials)?;
    Ok(total)
}

/// Convenience: sample a configuration for the data's base surface.
pub fn configuration_for(
    surface: &BlowupSurface,
    opts: &CfgOptions,
) -> Result<ConcreteConfiguration, LinsysError> {
    sample_configuration(surface, opts.prime, opts.seed)
}

#[cfg(test)]
mod tests;
