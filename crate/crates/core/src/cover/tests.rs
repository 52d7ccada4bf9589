use std::collections::BTreeMap;

use super::*;
use crate::constructions::{builtin, BuiltinName};
use crate::picard::PointKind;
use crate::quotient::singularity_census;

fn opts() -> CfgOptions {
    CfgOptions::default()
}

fn sig(a: u8, b: u8) -> Sigma {
    Sigma::new(a, b).unwrap()
}

fn chi(a: u8, b: u8) -> Chi {
    Chi::new(a, b).unwrap()
}

fn gamma10() -> Subgroup {
    Subgroup::generated_by(sig(1, 0))
}

#[test]
fn main_data_verifies() {
    let spec = builtin(BuiltinName::Main);
    let report = verify_building_data(&spec.data).unwrap();
    assert!(report.passed(), "{:?}", report.first_failure());
    assert_eq!(report.entries.len(), 10); // 8 relations + reduced + nontrivial
}

#[test]
fn emptying_a_divisor_breaks_relations() {
    let spec = builtin(BuiltinName::Main);
    let mut broken = spec.data.clone();
    broken.branch.insert(sig(1, 2), Vec::new());
    let report = verify_building_data(&broken).unwrap();
    assert!(!report.passed());
    let failed: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| !e.passed)
        .map(|e| e.name.as_str())
        .collect();
    assert!(failed.contains(&"relation 3L10"));
    assert!(failed.contains(&"relation 3L01"));
}

#[test]
fn duplicate_component_is_not_reduced() {
    let spec = builtin(BuiltinName::Main);
    let mut broken = spec.data.clone();
    let dup = broken.components(sig(2, 2))[0].clone();
    broken.branch.get_mut(&sig(0, 1)).unwrap().push(dup);
    let report = verify_building_data(&broken).unwrap();
    let entry = report
        .entries
        .iter()
        .find(|e| e.name == "branch reduced")
        .unwrap();
    assert!(!entry.passed);
}

#[test]
fn builtins_are_smooth() {
    for name in BuiltinName::all() {
        let spec = builtin(name);
        let violations = check_smoothness(&spec.data).unwrap();
        assert!(violations.is_empty(), "{name}: {violations:?}");
    }
}

#[test]
fn declared_triple_point_is_a_violation() {
    // the pre-resolution data of the first variation: three components
    // through one point
    let mut spec = builtin(BuiltinName::Main);
    spec.data.specials.push(SpecialPoint {
        refs: vec![(sig(0, 2), 0), (sig(2, 2), 0), (sig(1, 2), 0)],
        transverse: true,
    });
    let violations = check_smoothness(&spec.data).unwrap();
    assert_eq!(violations.len(), 1);
    assert!(matches!(
        violations[0].kind,
        ViolationKind::TooManyComponents(3)
    ));
}

#[test]
fn same_inertia_meeting_is_a_violation() {
    // the halfway state of the distinct-coefficients resolution: after the
    // first blow-up the exceptional curve sits in D01 and still meets the
    // strict transform of the D02 component, and both have the same
    // inertia subgroup
    let surface = BlowupSurface::general(4);
    let mut branch: BTreeMap<Sigma, Vec<ComponentId>> = BTreeMap::new();
    branch.insert(
        sig(0, 1),
        vec![
            ComponentId::pencil_member(0, 1),
            ComponentId::exceptional(3),
        ],
    );
    branch.insert(sig(0, 2), vec![ComponentId::line_through(&[0, 3])]);
    branch.insert(
        sig(2, 2),
        vec![
            ComponentId::line_through(&[1, 3]),
            ComponentId::pencil_member(1, 1),
            ComponentId::pencil_member(1, 2),
        ],
    );
    branch.insert(
        sig(1, 2),
        vec![
            ComponentId::line_through(&[2, 3]),
            ComponentId::pencil_member(2, 1),
            ComponentId::pencil_member(2, 2),
        ],
    );
    let mut bundles = BTreeMap::new();
    for c in Chi::all() {
        let mut rhs = surface.zero();
        for s in Sigma::all() {
            let coeff = relation_coefficient(c, s);
            for comp in branch.get(&s).map_or(&[][..], Vec::as_slice) {
                rhs = rhs
                    .checked_add(&comp.class_on(&surface).unwrap().scaled(coeff))
                    .unwrap();
            }
        }
        bundles.insert(c, rhs.divided_exactly(3).unwrap());
    }
    let data = BuildingDataZ32::new(surface, branch, bundles, Vec::new()).unwrap();
    assert!(verify_building_data(&data).unwrap().passed());

    let violations = check_smoothness(&data).unwrap();
    assert_eq!(violations.len(), 1, "{violations:?}");
    assert_eq!(violations[0].kind, ViolationKind::SameInertia);
    assert!(violations[0].location.contains("e4"));
    assert!(violations[0].location.contains("h14"));
}

#[test]
fn overdeclared_incidence_is_inconsistent() {
    // two lines meet exactly once, so a declared tangency (local
    // multiplicity two) exceeds the lattice number
    let mut spec = builtin(BuiltinName::Main);
    spec.data.specials.push(SpecialPoint {
        refs: vec![(sig(0, 1), 0), (sig(2, 2), 0)],
        transverse: false,
    });
    assert!(matches!(
        check_smoothness(&spec.data),
        Err(CoverError::ArrangementInconsistent(_))
    ));
}

#[test]
fn transport_rejects_cross_side_specials() {
    let spec = builtin(BuiltinName::Main);
    let mut z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    z3.specials.push(SpecialPointZ3 {
        refs: vec![(Z3Side::D1, 0), (Z3Side::D2, 0)],
        transverse: true,
    });
    assert!(matches!(
        crossing_points(&z3),
        Err(CoverError::UnsupportedTransport(_))
    ));
}

#[test]
fn cover_invariants_of_the_builtins() {
    let cases = [
        (BuiltinName::Main, 30, 5, 6),
        (BuiltinName::Var2x0, 21, 4, 5),
        (BuiltinName::Thm2, 35, 6, 7),
    ];
    for (name, k2, pg, chi_o) in cases {
        let spec = builtin(name);
        let cfg = configuration_for(&spec.data.surface, &opts()).unwrap();
        let analysis = z32_invariants(&spec.data, &cfg, &opts()).unwrap();
        assert_eq!(analysis.invariants.k2, k2, "{name}");
        assert_eq!(analysis.invariants.pg, pg, "{name}");
        assert_eq!(analysis.invariants.chi, chi_o, "{name}");
        assert_eq!(analysis.invariants.q, 0, "{name}");
        assert!(analysis.descent_nef && analysis.descent_big, "{name}");
        assert!(analysis.invariants.consistent());
    }
}

#[test]
fn euler_characteristic_cross_check() {
    // topological route to chi(O), independent of the bundle classes: the
    // cover has 9 sheets off the branch, 3 over its smooth points and 1
    // over each double point, so with rational components (Euler number 2
    // each) and simple crossings
    //   e(X) = 9 e(Y) - 12 #components + 4 #crossings
    // and Noether's formula 12 chi = K^2 + e must close the loop
    for name in BuiltinName::all() {
        let spec = builtin(name);
        let e_cover = euler_number(&spec.data).unwrap();
        let cfg = configuration_for(&spec.data.surface, &opts()).unwrap();
        let analysis = z32_invariants(&spec.data, &cfg, &opts()).unwrap();
        assert_eq!(
            12 * analysis.invariants.chi,
            analysis.invariants.k2 + e_cover,
            "{name}: chi = {}, K^2 = {}, e = {e_cover}",
            analysis.invariants.chi,
            analysis.invariants.k2
        );
    }
}

#[test]
fn variation_two_descent_class() {
    let spec = builtin(BuiltinName::Var2x1);
    let cfg = configuration_for(&spec.data.surface, &opts()).unwrap();
    let analysis = z32_invariants(&spec.data, &cfg, &opts()).unwrap();
    assert_eq!(analysis.invariants.k2, 19);
    assert_eq!(analysis.invariants.pg, 4);
}

#[test]
fn extraction_groups_by_relation_coefficient() {
    let spec = builtin(BuiltinName::Main);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    // D1 = D01 + D22 + D12 (7 components), D2 = D02 (1 component)
    assert_eq!(z3.d1.len(), 7);
    assert_eq!(z3.d2.len(), 1);
    assert_eq!(z3.d2[0], ComponentId::pencil_member(0, 2));
    assert_eq!(z3.l1, spec.data.bundles[&chi(0, 1)]);
    assert_eq!(z3.l2, spec.data.bundles[&chi(0, 2)]);
    assert!(z3.verify().unwrap().passed());
}

#[test]
fn extraction_for_every_subgroup_satisfies_relations() {
    let spec = builtin(BuiltinName::Main);
    for generator in [sig(1, 0), sig(0, 1), sig(1, 1), sig(1, 2)] {
        let gamma = Subgroup::generated_by(generator);
        // subgroups with branch components inside them cannot descend
        let has_internal = Sigma::all()
            .into_iter()
            .any(|s| gamma.contains(s) && !spec.data.components(s).is_empty());
        let result = extract_z3_subcover(&spec.data, gamma);
        if has_internal {
            assert!(result.is_err(), "{gamma}");
        } else {
            assert!(result.unwrap().verify().unwrap().passed(), "{gamma}");
        }
    }
}

#[test]
fn thm2_extraction_shape() {
    let spec = builtin(BuiltinName::Thm2);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    assert_eq!(z3.d1.len(), 9); // three lines, two members + e3, two members + e2
    assert_eq!(z3.d2.len(), 1);
    assert_eq!(z3.d2[0], ComponentId::line_through(&[1, 2, 3, 4, 5]));
}

#[test]
fn transport_of_the_main_construction() {
    let spec = builtin(BuiltinName::Main);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let points = crossing_points(&z3).unwrap();
    assert_eq!(points.len(), 6);
    let transported = blow_up_transport(&z3, &points).unwrap();
    assert_eq!(transported.surface.point_count(), 9);
    let descent = transported.descent_class().unwrap();
    assert_eq!(descent.self_intersection(), 24);

    let cfg = configuration_for(&transported.surface, &opts()).unwrap();
    let analysis = z3_invariants(&transported, &cfg, &opts()).unwrap();
    assert_eq!(analysis.invariants.k2, 8);
    assert_eq!(analysis.invariants.pg, 5);
    assert_eq!(analysis.invariants.chi, 6);
    assert_eq!(analysis.invariants.q, 0);
}

#[test]
fn transport_of_the_six_point_construction() {
    let spec = builtin(BuiltinName::Thm2);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let points = crossing_points(&z3).unwrap();
    assert_eq!(points.len(), 2);
    let transported = blow_up_transport(&z3, &points).unwrap();
    // both crossings lie on exceptional curves: infinitely near points
    let news: Vec<_> = transported.surface.points()[6..].to_vec();
    assert!(news
        .iter()
        .all(|k| matches!(k, PointKind::InfinitelyNear { .. })));
    assert_eq!(transported.descent_class().unwrap().self_intersection(), 33);

    let cfg = configuration_for(&transported.surface, &opts()).unwrap();
    let analysis = z3_invariants(&transported, &cfg, &opts()).unwrap();
    assert_eq!(analysis.invariants.k2, 11);
    assert_eq!(analysis.invariants.pg, 6);
    assert_eq!(analysis.invariants.chi, 7);
}

#[test]
fn transport_with_no_points_is_identity() {
    let spec = builtin(BuiltinName::Var1x3);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let points = crossing_points(&z3).unwrap();
    assert!(points.is_empty());
    let transported = blow_up_transport(&z3, &points).unwrap();
    assert_eq!(transported, z3);
}

#[test]
fn transport_rejects_wrong_point_sets() {
    let spec = builtin(BuiltinName::Main);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let mut points = crossing_points(&z3).unwrap();
    points.pop();
    assert!(matches!(
        blow_up_transport(&z3, &points),
        Err(CoverError::UnsupportedTransport(_))
    ));
}

#[test]
fn resolution_distinct_coefficients_matches_printed_data() {
    let mut spec = builtin(BuiltinName::Main);
    spec.data.specials.push(SpecialPoint {
        refs: vec![(sig(0, 2), 0), (sig(2, 2), 0), (sig(1, 2), 0)],
        transverse: true,
    });
    let resolved =
        resolve_triple_point(&spec.data, 0, TriplePointCase::DistinctCoefficients).unwrap();
    // D01 = f1_1 + strict exceptional, D02 = line through P1 and the new point
    assert_eq!(
        resolved.components(sig(0, 1)),
        &[
            ComponentId::pencil_member(0, 1),
            ComponentId::exceptional(3)
        ]
    );
    assert_eq!(
        resolved.components(sig(0, 2)),
        &[ComponentId::line_through(&[0, 3])]
    );
    assert_eq!(
        resolved.branch_class(sig(0, 1)).unwrap(),
        DivisorClass::new(1, vec![1, 0, 0, -1, 1])
    );
    assert_eq!(
        resolved.branch_class(sig(0, 2)).unwrap(),
        DivisorClass::new(1, vec![1, 0, 0, 1, 1])
    );
    assert!(verify_building_data(&resolved).unwrap().passed());
    assert!(check_smoothness(&resolved).unwrap().is_empty());
}

#[test]
fn resolution_equal_coefficients_matches_printed_data() {
    let mut spec = builtin(BuiltinName::Main);
    spec.data.specials.push(SpecialPoint {
        refs: vec![(sig(0, 1), 0), (sig(2, 2), 0), (sig(1, 2), 0)],
        transverse: true,
    });
    let resolved = resolve_triple_point(&spec.data, 0, TriplePointCase::EqualCoefficients).unwrap();
    // a single blow-up, no exceptional curve in the branch
    assert_eq!(resolved.surface.point_count(), 4);
    assert_eq!(
        resolved.components(sig(0, 1)),
        &[ComponentId::line_through(&[0, 3])]
    );
    let all: Vec<_> = resolved.all_components();
    assert!(all
        .iter()
        .all(|(_, c)| !matches!(c, ComponentId::ExcCurve { .. })));
    let cfg = configuration_for(&resolved.surface, &opts()).unwrap();
    let analysis = z32_invariants(&resolved, &cfg, &opts()).unwrap();
    assert_eq!(analysis.invariants.k2, 21);
}

#[test]
fn resolution_case_mismatch_is_rejected() {
    let mut spec = builtin(BuiltinName::Main);
    spec.data.specials.push(SpecialPoint {
        refs: vec![(sig(0, 2), 0), (sig(2, 2), 0), (sig(1, 2), 0)],
        transverse: true,
    });
    assert!(matches!(
        resolve_triple_point(&spec.data, 0, TriplePointCase::EqualCoefficients),
        Err(CoverError::CaseMismatch(_))
    ));
}

#[test]
fn resolution_shifts_the_invariants_by_the_expected_amount() {
    // one distinct-coefficients triple point: K^2 drops by 2, p_g and chi
    // stay fixed
    let main = builtin(BuiltinName::Main);
    let var1 = builtin(BuiltinName::Var1x1);
    let cfg_main = configuration_for(&main.data.surface, &opts()).unwrap();
    let cfg_var1 = configuration_for(&var1.data.surface, &opts()).unwrap();
    let a = z32_invariants(&main.data, &cfg_main, &opts()).unwrap();
    let b = z32_invariants(&var1.data, &cfg_var1, &opts()).unwrap();
    assert_eq!(b.invariants.k2, a.invariants.k2 - 2);
    assert_eq!(b.invariants.pg, a.invariants.pg);
    assert_eq!(b.invariants.chi, a.invariants.chi);
    // and the census shifts by (+1, -2)
    let census_a =
        singularity_census(&extract_z3_subcover(&main.data, gamma10()).unwrap()).unwrap();
    let census_b =
        singularity_census(&extract_z3_subcover(&var1.data, gamma10()).unwrap()).unwrap();
    assert_eq!(census_b.n, census_a.n + 1);
    assert_eq!(census_b.m, census_a.m - 2);
}

#[test]
fn cover_section_counts() {
    // main construction: pullback of f2 + f3 has four sections
    let spec = builtin(BuiltinName::Main);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let points = crossing_points(&z3).unwrap();
    let transported = blow_up_transport(&z3, &points).unwrap();
    let cfg = configuration_for(&transported.surface, &opts()).unwrap();
    let a = spec
        .canonical_summand
        .unwrap()
        .pullback_to(&spec.data.surface, &transported.surface)
        .unwrap();
    assert_eq!(
        cover_section_h0(&a, &transported, &cfg, &opts()).unwrap(),
        4
    );

    // the aligned variation: pullback of 2l - e2 - e3 - e4 has three
    let spec = builtin(BuiltinName::Var2x0);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let transported = blow_up_transport(&z3, &crossing_points(&z3).unwrap()).unwrap();
    let cfg = configuration_for(&transported.surface, &opts()).unwrap();
    let a = spec
        .canonical_summand
        .unwrap()
        .pullback_to(&spec.data.surface, &transported.surface)
        .unwrap();
    assert_eq!(
        cover_section_h0(&a, &transported, &cfg, &opts()).unwrap(),
        3
    );

    // the six-point construction: pullback of l + f1 has five
    let spec = builtin(BuiltinName::Thm2);
    let z3 = extract_z3_subcover(&spec.data, gamma10()).unwrap();
    let transported = blow_up_transport(&z3, &crossing_points(&z3).unwrap()).unwrap();
    let cfg = configuration_for(&transported.surface, &opts()).unwrap();
    let a = spec
        .canonical_summand
        .unwrap()
        .pullback_to(&spec.data.surface, &transported.surface)
        .unwrap();
    assert_eq!(
        cover_section_h0(&a, &transported, &cfg, &opts()).unwrap(),
        5
    );
}

#[test]
fn degenerate_z3_data_is_rejected() {
    let surface = BlowupSurface::general(3);
    let data = BuildingDataZ3 {
        surface: surface.clone(),
        d1: Vec::new(),
        d2: Vec::new(),
        l1: surface.zero(),
        l2: surface.zero(),
        specials: Vec::new(),
    };
    let cfg = configuration_for(&surface, &opts()).unwrap();
    assert!(matches!(
        z3_invariants(&data, &cfg, &opts()),
        Err(CoverError::InvalidData(_))
    ));
}
