//! Exact section counts for divisor classes on blow-ups of the plane.
//!
//! `h0` of a class `d*l - sum m_i e_i` is the dimension of the space of
//! degree-`d` plane curves with multiplicity at least `m_i` at each point,
//! computed as the nullity of an interpolation matrix over a large prime
//! field. Points are sampled at random subject to exactly the declared
//! constraints; taking the minimum over several independent samples
//! protects against special position, since special position can only
//! make `h0` jump up. A condition at an infinitely near point is imposed
//! on the strict transform through the standard blow-up chart
//! `x = s, y = s*(tau + t)`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::fp::{FpMatrix, PrimeField};
use crate::picard::{BlowupSurface, DivisorClass, PicardError, PointKind, TangentTag};

/// Smallest admissible field modulus; small fields risk losing genericity.
pub const MIN_PRIME: u64 = 1_000_000;

/// Default modulus, trial count and seed for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfgOptions {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
}

impl Default for CfgOptions {
    fn default() -> Self {
        CfgOptions {
            prime: 2_147_483_647,
            seed: 0,
            trials: 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum LinsysError {
    #[error("modulus {0} is not a prime above {MIN_PRIME}")]
    BadPrime(u64),
    #[error("constraint system unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("no sufficiently general configuration found after {0} attempts")]
    GenericityFailed(u32),
    #[error("class demands multiplicity {mult} at P{point} but the configuration carries no coordinates for it")]
    MissingCoordinates { point: usize, mult: i64 },
    #[error("class has {0} coordinates but the configuration surface has {1} points")]
    ShapeMismatch(usize, usize),
    #[error("degree {0} is out of the supported range")]
    DegreeTooLarge(i64),
    #[error(transparent)]
    Lattice(#[from] PicardError),
}

/// Concrete coordinates for one sampled position of the blown-up points.
#[derive(Debug, Clone)]
pub struct ConcreteConfiguration {
    surface: BlowupSurface,
    field: PrimeField,
    seed: u64,
    coords: Vec<PointData>,
}

#[derive(Debug, Clone, Copy)]
enum PointData {
    Proper {
        x: u64,
        y: u64,
    },
    /// Slope of the tangent direction at the parent, in the affine chart.
    Direction {
        tau: u64,
    },
}

impl ConcreteConfiguration {
    pub fn surface(&self) -> &BlowupSurface {
        &self.surface
    }

    pub fn prime(&self) -> u64 {
        self.field.modulus()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Proper-point coordinates, for inspection in tests.
    pub fn proper_coords(&self) -> Vec<Option<(u64, u64)>> {
        self.coords
            .iter()
            .map(|p| match p {
                PointData::Proper { x, y } => Some((*x, *y)),
                PointData::Direction { .. } => None,
            })
            .collect()
    }
}

const SAMPLE_ATTEMPTS: u32 = 64;

/// Samples coordinates satisfying exactly the declared constraints of the
/// surface. Deterministic for a fixed seed.
pub fn sample_configuration(
    surface: &BlowupSurface,
    prime: u64,
    seed: u64,
) -> Result<ConcreteConfiguration, LinsysError> {
    let field = PrimeField::new(prime)
        .filter(|f| f.modulus() > MIN_PRIME)
        .ok_or(LinsysError::BadPrime(prime))?;
    let mut rng = StdRng::seed_from_u64(seed ^ prime.rotate_left(17));
    for _ in 0..SAMPLE_ATTEMPTS {
        if let Some(coords) = try_sample(surface, field, &mut rng)? {
            return Ok(ConcreteConfiguration {
                surface: surface.clone(),
                field,
                seed,
                coords,
            });
        }
    }
    Err(LinsysError::GenericityFailed(SAMPLE_ATTEMPTS))
}

fn try_sample(
    surface: &BlowupSurface,
    field: PrimeField,
    rng: &mut StdRng,
) -> Result<Option<Vec<PointData>>, LinsysError> {
    let p = field.modulus();
    let n = surface.point_count();
    let mut coords: Vec<Option<PointData>> = vec![None; n];

    // collinear groups first, all lines kept non-vertical. Groups may
    // share points (two lines through one triple point), so a group's
    // line must pass through every member some earlier group already
    // placed; with two or more placed members the line is determined.
    for group in surface.collinear_groups() {
        let placed: Vec<(u64, u64)> = group
            .iter()
            .filter_map(|&i| proper_xy(&coords, i))
            .collect();
        let (x0, y0, slope) = match placed.as_slice() {
            [] => (
                rng.gen_range(0..p),
                rng.gen_range(0..p),
                rng.gen_range(0..p),
            ),
            [(x0, y0)] => (*x0, *y0, rng.gen_range(0..p)),
            [(x0, y0), (x1, y1), ..] => {
                if x0 == x1 {
                    return Ok(None); // determined line is vertical: resample
                }
                let slope = field.mul(field.sub(*y1, *y0), field.inv(field.sub(*x1, *x0)));
                (*x0, *y0, slope)
            }
        };
        let on_line = |x: u64, y: u64| y == field.add(y0, field.mul(slope, field.sub(x, x0)));
        let mut used: Vec<u64> = Vec::new();
        for &i in group {
            if let Some((x, y)) = proper_xy(&coords, i) {
                if !on_line(x, y) {
                    return Err(LinsysError::Unsatisfiable(format!(
                        "P{} cannot lie on two different declared lines",
                        i + 1
                    )));
                }
                used.push(x);
                continue;
            }
            let mut xi;
            loop {
                xi = rng.gen_range(0..p);
                if !used.contains(&xi) {
                    break;
                }
            }
            used.push(xi);
            let yi = field.add(y0, field.mul(slope, field.sub(xi, x0)));
            coords[i] = Some(PointData::Proper { x: xi, y: yi });
        }
    }

    for (i, kind) in surface.points().iter().enumerate() {
        if coords[i].is_some() {
            continue;
        }
        match kind {
            PointKind::Proper => {
                coords[i] = Some(PointData::Proper {
                    x: rng.gen_range(0..p),
                    y: rng.gen_range(0..p),
                });
            }
            PointKind::InfinitelyNear { .. } => {} // second pass
        }
    }

    // tangent directions once every proper point is placed
    for (i, kind) in surface.points().iter().enumerate() {
        let PointKind::InfinitelyNear { parent, direction } = kind else {
            continue;
        };
        let (px, py) = proper_xy(&coords, *parent).ok_or_else(|| {
            LinsysError::Unsatisfiable(format!("P{} has no parent coordinates", i + 1))
        })?;
        let tau = match direction {
            TangentTag::Toward(j) => {
                let (jx, jy) = proper_xy(&coords, *j).ok_or_else(|| {
                    LinsysError::Unsatisfiable(format!("tangent target P{} unplaced", j + 1))
                })?;
                if jx == px {
                    return Ok(None); // vertical direction: resample everything
                }
                field.mul(field.sub(jy, py), field.inv(field.sub(jx, px)))
            }
            TangentTag::Generic => rng.gen_range(0..p),
        };
        coords[i] = Some(PointData::Direction { tau });
    }

    let coords: Vec<PointData> = coords
        .into_iter()
        .map(|c| c.expect("all points placed"))
        .collect();

    if is_generic(surface, field, &coords) {
        Ok(Some(coords))
    } else {
        Ok(None)
    }
}

fn proper_xy(coords: &[Option<PointData>], i: usize) -> Option<(u64, u64)> {
    match coords.get(i)? {
        Some(PointData::Proper { x, y }) => Some((*x, *y)),
        _ => None,
    }
}

/// Rejects configurations with accidental coincidences: equal points,
/// unconstrained collinear triples, unconstrained co-conic six-tuples,
/// repeated or degenerate tangent directions.
fn is_generic(surface: &BlowupSurface, field: PrimeField, coords: &[PointData]) -> bool {
    let proper: Vec<(usize, u64, u64)> = coords
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            PointData::Proper { x, y } => Some((i, *x, *y)),
            _ => None,
        })
        .collect();

    for (a, &(_, xa, ya)) in proper.iter().enumerate() {
        for &(_, xb, yb) in proper.iter().skip(a + 1) {
            if xa == xb && ya == yb {
                return false;
            }
        }
    }

    let in_one_group = |pts: &[usize]| {
        surface
            .collinear_groups()
            .iter()
            .any(|g| pts.iter().all(|i| g.contains(i)))
    };

    // declared groups must actually be satisfied
    for group in surface.collinear_groups() {
        let pts: Vec<(usize, u64, u64)> = group
            .iter()
            .filter_map(|&i| proper.iter().find(|&&(j, _, _)| j == i).copied())
            .collect();
        if pts.len() != group.len() {
            return false;
        }
        for w in pts.windows(3) {
            if !collinear(field, w[0], w[1], w[2]) {
                return false;
            }
        }
    }

    // unconstrained triples must not be collinear
    for a in 0..proper.len() {
        for b in (a + 1)..proper.len() {
            for c in (b + 1)..proper.len() {
                let idx = [proper[a].0, proper[b].0, proper[c].0];
                if in_one_group(&idx) {
                    continue;
                }
                if collinear(field, proper[a], proper[b], proper[c]) {
                    return false;
                }
            }
        }
    }

    // six-tuples not forced through a conic must avoid one; a six-tuple
    // containing a constrained collinear triple lies on a degenerate conic
    // by design and is skipped
    if proper.len() >= 6 {
        let idxs: Vec<usize> = (0..proper.len()).collect();
        for combo in combinations(&idxs, 6) {
            let has_constrained_triple = combo.iter().enumerate().any(|(u, &a)| {
                combo.iter().enumerate().any(|(v, &b)| {
                    v > u
                        && combo.iter().enumerate().any(|(w, &c)| {
                            w > v && in_one_group(&[proper[a].0, proper[b].0, proper[c].0])
                        })
                })
            });
            if has_constrained_triple {
                continue;
            }
            let pts: Vec<(u64, u64)> = combo.iter().map(|&i| (proper[i].1, proper[i].2)).collect();
            if coconic(field, &pts) {
                return false;
            }
        }
    }

    // directions at one parent must be pairwise distinct and must not
    // accidentally point at another blown-up point
    for (i, kind) in surface.points().iter().enumerate() {
        let PointKind::InfinitelyNear { parent, direction } = kind else {
            continue;
        };
        let PointData::Direction { tau } = coords[i] else {
            return false;
        };
        for (j, other) in surface.points().iter().enumerate() {
            if j == i {
                continue;
            }
            if let PointKind::InfinitelyNear { parent: p2, .. } = other {
                if p2 == parent {
                    if let PointData::Direction { tau: tau2 } = coords[j] {
                        if tau == tau2 {
                            return false;
                        }
                    }
                }
            }
        }
        if matches!(direction, TangentTag::Generic) {
            let (px, py) = match coords[*parent] {
                PointData::Proper { x, y } => (x, y),
                _ => return false,
            };
            for &(q, qx, qy) in &proper {
                if q == *parent || qx == px {
                    continue;
                }
                let slope = field.mul(field.sub(qy, py), field.inv(field.sub(qx, px)));
                if slope == tau {
                    return false;
                }
            }
        }
    }

    true
}

fn collinear(
    field: PrimeField,
    a: (usize, u64, u64),
    b: (usize, u64, u64),
    c: (usize, u64, u64),
) -> bool {
    // det [[xb-xa, yb-ya], [xc-xa, yc-ya]] == 0
    let d1 = field.mul(field.sub(b.1, a.1), field.sub(c.2, a.2));
    let d2 = field.mul(field.sub(c.1, a.1), field.sub(b.2, a.2));
    d1 == d2
}

fn coconic(field: PrimeField, pts: &[(u64, u64)]) -> bool {
    debug_assert_eq!(pts.len(), 6);
    let mut m = FpMatrix::zeros(field, 6, 6);
    for (r, &(x, y)) in pts.iter().enumerate() {
        let x2 = field.mul(x, x);
        let xy = field.mul(x, y);
        let y2 = field.mul(y, y);
        for (c, v) in [x2, xy, y2, x, y, 1].into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m.rank() < 6
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if chosen.len() == k {
            out.push(chosen);
            continue;
        }
        for i in start..items.len() {
            let mut next = chosen.clone();
            next.push(items[i]);
            stack.push((i + 1, next));
        }
    }
    out
}

/// Number of coefficients of a plane curve of degree `d`.
fn monomial_count(d: i64) -> usize {
    (((d + 1) * (d + 2)) / 2) as usize
}

/// Dimension of global sections of the class, as the minimum over
/// `trials` independently sampled configurations. The class may live on an
/// extension of the configuration's surface as long as every coordinate
/// beyond it carries a nonpositive multiplicity.
pub fn h0(
    class: &DivisorClass,
    cfg: &ConcreteConfiguration,
    trials: u32,
) -> Result<u64, LinsysError> {
    let trials = trials.max(1);
    let mut best: Option<u64> = None;
    for t in 0..trials {
        let value = if t == 0 {
            h0_single(class, cfg)?
        } else {
            let fresh = sample_configuration(
                &cfg.surface,
                cfg.field.modulus(),
                cfg.seed.wrapping_add(t as u64),
            )?;
            h0_single(class, &fresh)?
        };
        best = Some(best.map_or(value, |b| b.min(value)));
    }
    Ok(best.unwrap())
}

/// `h0` on one concrete configuration.
pub fn h0_single(class: &DivisorClass, cfg: &ConcreteConfiguration) -> Result<u64, LinsysError> {
    let d = class.degree();
    if d < 0 {
        return Ok(0);
    }
    if d > 40 {
        return Err(LinsysError::DegreeTooLarge(d));
    }
    let n_cfg = cfg.surface.point_count();
    let mults = class.multiplicities();
    if mults.len() < n_cfg {
        return Err(LinsysError::ShapeMismatch(mults.len(), n_cfg));
    }
    for (i, &m) in mults.iter().enumerate().skip(n_cfg) {
        if m > 0 {
            return Err(LinsysError::MissingCoordinates {
                point: i + 1,
                mult: m,
            });
        }
    }

    let field = cfg.field;
    let cols = monomial_count(d);
    let monomials: Vec<(i64, i64)> = (0..=d)
        .flat_map(|a| (0..=(d - a)).map(move |b| (a, b)))
        .collect();
    debug_assert_eq!(monomials.len(), cols);

    let mut rows: Vec<Vec<u64>> = Vec::new();

    for (i, kind) in cfg.surface.points().iter().enumerate() {
        if !matches!(kind, PointKind::Proper) {
            continue;
        }
        let m_p = mults[i];
        let positive_children: Vec<(usize, i64)> = cfg
            .surface
            .children(i)
            .into_iter()
            .filter_map(|c| {
                let m = mults.get(c).copied().unwrap_or(0);
                (m > 0).then_some((c, m))
            })
            .collect();

        if m_p <= 0 && positive_children.is_empty() {
            continue;
        }
        let PointData::Proper { x, y } = cfg.coords[i] else {
            continue;
        };

        // multiplicity at the proper point itself
        if m_p > 0 {
            rows.extend(multiplicity_rows(field, &monomials, x, y, m_p));
        }
        // strict-transform conditions, one blow-up chart per child
        for (child, m_q) in positive_children {
            let PointData::Direction { tau } = cfg.coords[child] else {
                return Err(LinsysError::Unsatisfiable(format!(
                    "P{} lacks a sampled tangent direction",
                    child + 1
                )));
            };
            rows.extend(chart_rows(field, &monomials, d, x, y, tau, m_p, m_q));
        }
    }

    let mut matrix = FpMatrix::zeros(field, rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            matrix.set(r, c, v);
        }
    }
    Ok(matrix.nullity() as u64)
}

/// Rows forcing multiplicity >= `m` at `(x, y)`: all Taylor coefficients
/// of order below `m` vanish.
fn multiplicity_rows(
    field: PrimeField,
    monomials: &[(i64, i64)],
    x: u64,
    y: u64,
    m: i64,
) -> Vec<Vec<u64>> {
    let mut rows = Vec::new();
    for alpha in 0..m {
        for beta in 0..(m - alpha) {
            let mut row = vec![0u64; monomials.len()];
            for (c, &(a, b)) in monomials.iter().enumerate() {
                if a < alpha || b < beta {
                    continue;
                }
                let v = field.mul(
                    field.mul(binomial(field, a, alpha), binomial(field, b, beta)),
                    field.mul(
                        field.pow(x, (a - alpha) as u64),
                        field.pow(y, (b - beta) as u64),
                    ),
                );
                row[c] = v;
            }
            rows.push(row);
        }
    }
    rows
}

/// Rows from the chart `x = x0 + s`, `y = y0 + s*(tau + t)`. Writing the
/// substituted polynomial as `sum gamma_{jk} s^j t^k` and dividing by
/// `s^{m_p}`, the strict transform vanishes to order `m_q` at the
/// infinitely near point iff `gamma_{jk} = 0` whenever
/// `(j - m_p) + k < m_q`. Negative `m_p` weakens the conditions, matching
/// classes that add exceptional multiples instead of subtracting them.
/// The multiplicity conditions at the parent itself are emitted
/// separately by `multiplicity_rows`.
#[allow(clippy::too_many_arguments)]
fn chart_rows(
    field: PrimeField,
    monomials: &[(i64, i64)],
    d: i64,
    x0: u64,
    y0: u64,
    tau: u64,
    m_p: i64,
    m_q: i64,
) -> Vec<Vec<u64>> {
    // gamma_{jk} as a linear form in the curve coefficients:
    // x^a y^b -> sum_{alpha+beta=j, beta>=k}
    //   C(a,alpha) C(b,beta) C(beta,k) x0^{a-alpha} y0^{b-beta} tau^{beta-k}
    let gamma_row = |j: i64, k: i64| -> Vec<u64> {
        let mut row = vec![0u64; monomials.len()];
        for (c, &(a, b)) in monomials.iter().enumerate() {
            let mut acc = 0u64;
            for beta in k..=b.min(j) {
                let alpha = j - beta;
                if alpha < 0 || alpha > a {
                    continue;
                }
                let term = field.mul(
                    field.mul(binomial(field, a, alpha), binomial(field, b, beta)),
                    field.mul(
                        binomial(field, beta, k),
                        field.mul(
                            field.mul(
                                field.pow(x0, (a - alpha) as u64),
                                field.pow(y0, (b - beta) as u64),
                            ),
                            field.pow(tau, (beta - k) as u64),
                        ),
                    ),
                );
                acc = field.add(acc, term);
            }
            row[c] = acc;
        }
        row
    };

    let mut rows = Vec::new();
    // gamma_{jk} vanishes identically for j > d, so the range is finite
    for j in m_p.max(0)..=d {
        let bound = m_q + m_p - j; // conditions demand k < bound
        if bound <= 0 {
            continue;
        }
        for k in 0..bound.min(j + 1) {
            rows.push(gamma_row(j, k));
        }
    }
    rows
}

fn binomial(field: PrimeField, n: i64, k: i64) -> u64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = field.mul(num, field.reduce_i64(n - i));
        den = field.mul(den, field.reduce_i64(i + 1));
    }
    field.mul(num, field.inv(den))
}

/// Effective classes of negative self-intersection used to certify
/// nefness: exceptional curves (total and strict), strict transforms of
/// lines through pairs of proper points and through every declared
/// collinear group, and conics through five proper points when there are
/// at least five. Each candidate is kept only if it is representable in
/// the sampled configuration, so the catalog is a certificate relative to
/// the configuration, not a proof of nefness in general.
#[derive(Debug, Clone)]
pub struct NegativeCurveCatalog {
    entries: Vec<(String, DivisorClass)>,
}

impl NegativeCurveCatalog {
    pub fn entries(&self) -> &[(String, DivisorClass)] {
        &self.entries
    }
}

pub fn negative_curve_catalog(
    cfg: &ConcreteConfiguration,
    trials: u32,
) -> Result<NegativeCurveCatalog, LinsysError> {
    let surface = &cfg.surface;
    let mut candidates: Vec<(String, DivisorClass)> = Vec::new();

    for i in 0..surface.point_count() {
        candidates.push((format!("e{}", i + 1), surface.exceptional(i)?));
        if !surface.children(i).is_empty() {
            candidates.push((format!("ebar{}", i + 1), surface.strict_exceptional(i)?));
        }
    }

    let proper: Vec<usize> = (0..surface.point_count())
        .filter(|&i| surface.is_proper(i))
        .collect();
    let same_group = |a: usize, b: usize| {
        surface
            .collinear_groups()
            .iter()
            .any(|g| g.contains(&a) && g.contains(&b))
    };
    for (ai, &a) in proper.iter().enumerate() {
        for &b in proper.iter().skip(ai + 1) {
            if same_group(a, b) {
                continue;
            }
            let name = format!("h{}{}", a + 1, b + 1);
            candidates.push((name, surface.line_through(&[a, b])?));
        }
    }
    for group in surface.collinear_groups() {
        let mut sorted = group.clone();
        sorted.sort_unstable();
        let name = format!(
            "h{}",
            sorted
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<String>()
        );
        candidates.push((name, surface.line_through(&sorted)?));
    }

    if proper.len() >= 5 {
        for combo in combinations(&proper, 5) {
            let mut class = surface.line().scaled(2);
            for &i in &combo {
                class = class.checked_sub(&surface.exceptional(i)?)?;
            }
            let name = format!(
                "q{}",
                combo
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<String>()
            );
            candidates.push((name, class));
        }
    }

    let mut entries = Vec::new();
    for (name, class) in candidates {
        if class.self_intersection() >= 0 {
            continue;
        }
        if h0(&class, cfg, trials)? >= 1 {
            entries.push((name, class));
        }
    }
    Ok(NegativeCurveCatalog { entries })
}

/// Nef/big certificate relative to a catalog of negative curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NefBig {
    pub nef: bool,
    pub big: bool,
}

pub fn is_nef_big(
    class: &DivisorClass,
    catalog: &NegativeCurveCatalog,
) -> Result<NefBig, PicardError> {
    let mut nef = class.degree() >= 0; // pairing with the line class
    for (_, gamma) in &catalog.entries {
        if class.intersect(gamma)? < 0 {
            nef = false;
            break;
        }
    }
    let big = nef && class.self_intersection() > 0;
    Ok(NefBig { nef, big })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::TangentTag;

    fn opts() -> CfgOptions {
        CfgOptions::default()
    }

    fn cfg_for(surface: &BlowupSurface) -> ConcreteConfiguration {
        sample_configuration(surface, opts().prime, opts().seed).unwrap()
    }

    fn y3() -> BlowupSurface {
        BlowupSurface::general(3)
    }

    fn y6() -> BlowupSurface {
        let mut s = BlowupSurface::general(6);
        s.add_collinear_group(vec![1, 2, 3, 4, 5]).unwrap();
        s
    }

    fn ybar4() -> BlowupSurface {
        let mut s = BlowupSurface::general(4);
        s.push_infinitely_near(3, TangentTag::Toward(0)).unwrap();
        s
    }

    #[test]
    fn sampling_respects_constraints() {
        let cfg = cfg_for(&y3());
        let pts: Vec<(u64, u64)> = cfg.proper_coords().into_iter().flatten().collect();
        assert_eq!(pts.len(), 3);
        // non-collinear by the genericity guard
        let f = PrimeField::new(cfg.prime()).unwrap();
        assert!(!collinear(
            f,
            (0, pts[0].0, pts[0].1),
            (1, pts[1].0, pts[1].1),
            (2, pts[2].0, pts[2].1)
        ));

        let cfg6 = cfg_for(&y6());
        let pts6: Vec<(u64, u64)> = cfg6.proper_coords().into_iter().flatten().collect();
        // P2..P6 on one line, P1 off it
        assert!(collinear(
            f,
            (0, pts6[1].0, pts6[1].1),
            (1, pts6[2].0, pts6[2].1),
            (2, pts6[3].0, pts6[3].1)
        ));
        assert!(!collinear(
            f,
            (0, pts6[0].0, pts6[0].1),
            (1, pts6[1].0, pts6[1].1),
            (2, pts6[2].0, pts6[2].1)
        ));
    }

    #[test]
    fn sampling_handles_groups_sharing_a_point() {
        // two declared lines through one common point
        let mut s = BlowupSurface::general(5);
        s.add_collinear_group(vec![0, 1, 2]).unwrap();
        s.add_collinear_group(vec![2, 3, 4]).unwrap();
        let cfg = cfg_for(&s);
        let pts: Vec<(u64, u64)> = cfg.proper_coords().into_iter().flatten().collect();
        let f = PrimeField::new(cfg.prime()).unwrap();
        let at = |i: usize| (i, pts[i].0, pts[i].1);
        assert!(collinear(f, at(0), at(1), at(2)));
        assert!(collinear(f, at(2), at(3), at(4)));
        assert!(!collinear(f, at(0), at(1), at(3)));
    }

    #[test]
    fn sampling_resolves_constrained_directions() {
        // the infinitely near point over P4 points along the line P1P4
        let s = ybar4();
        let cfg = cfg_for(&s);
        let f = PrimeField::new(cfg.prime()).unwrap();
        let pts = cfg.proper_coords();
        let (x1, y1) = pts[0].unwrap();
        let (x4, y4) = pts[3].unwrap();
        let slope = f.mul(f.sub(y1, y4), f.inv(f.sub(x1, x4)));
        let PointData::Direction { tau } = cfg.coords[4] else {
            panic!("P5 should carry a direction");
        };
        assert_eq!(tau, slope);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_configuration(&y6(), opts().prime, 7).unwrap();
        let b = sample_configuration(&y6(), opts().prime, 7).unwrap();
        assert_eq!(a.proper_coords(), b.proper_coords());
    }

    #[test]
    fn rejects_small_or_composite_modulus() {
        assert!(matches!(
            sample_configuration(&y3(), 65_537, 0),
            Err(LinsysError::BadPrime(_))
        ));
        assert!(matches!(
            sample_configuration(&y3(), 1_000_004, 0),
            Err(LinsysError::BadPrime(_))
        ));
    }

    #[test]
    fn anticanonical_sections_on_y3() {
        let s = y3();
        let cfg = cfg_for(&s);
        let minus_k = -&s.canonical_class();
        assert_eq!(h0(&minus_k, &cfg, 5).unwrap(), 7);
    }

    #[test]
    fn anticanonical_sections_on_y4() {
        let s = BlowupSurface::general(4);
        let cfg = cfg_for(&s);
        assert_eq!(h0(&(-&s.canonical_class()), &cfg, 5).unwrap(), 6);
    }

    #[test]
    fn vanishing_and_constant_sections() {
        let s = y3();
        let cfg = cfg_for(&s);
        // e1 - e3: nonzero effective difference has no sections
        let c = &s.exceptional(0).unwrap() - &s.exceptional(2).unwrap();
        assert_eq!(h0(&c, &cfg, 5).unwrap(), 0);
        assert_eq!(h0(&s.zero(), &cfg, 5).unwrap(), 1);
        // negative degree
        assert_eq!(h0(&(-&s.line()), &cfg, 5).unwrap(), 0);
    }

    #[test]
    fn conics_through_two_points() {
        let s = y3();
        let cfg = cfg_for(&s);
        let c = &(&s.line().scaled(2) - &s.exceptional(1).unwrap()) - &s.exceptional(2).unwrap();
        // independent count: 6 conic coefficients minus 2 point conditions
        assert_eq!(h0(&c, &cfg, 5).unwrap(), 4);
    }

    #[test]
    fn infinitely_near_conditions() {
        let s = ybar4();
        let cfg = cfg_for(&s);
        // the line through P1 and P4 automatically has the constrained
        // direction, so demanding it costs nothing beyond the two points
        let h14 = s.named_class("h14").unwrap();
        assert_eq!(h0(&h14, &cfg, 5).unwrap(), 1);
        // the strict exceptional is effective and rigid
        let ebar = s.named_class("ebar4").unwrap();
        assert_eq!(h0(&ebar, &cfg, 5).unwrap(), 1);
        // lines through P4 with the constrained tangent direction: only
        // the line P1P4 itself, up to scale
        let mut c = s.line();
        c = &c - &s.exceptional(3).unwrap();
        c = &c - &s.exceptional(4).unwrap();
        assert_eq!(h0(&c, &cfg, 5).unwrap(), 1);
    }

    #[test]
    fn seed_independence_on_construction_classes() {
        let s = y3();
        let minus_k = -&s.canonical_class();
        let conic =
            &(&s.line().scaled(2) - &s.exceptional(1).unwrap()) - &s.exceptional(2).unwrap();
        for seed in 0..5u64 {
            let cfg = sample_configuration(&s, opts().prime, seed).unwrap();
            assert_eq!(h0_single(&minus_k, &cfg).unwrap(), 7);
            assert_eq!(h0_single(&conic, &cfg).unwrap(), 4);
        }
    }

    #[test]
    fn monotone_under_condition_removal() {
        let s = y6();
        let cfg = cfg_for(&s);
        // random-ish small classes: removing one point condition can only grow h0
        let classes = [
            DivisorClass::new(3, vec![1, 1, 1, 1, 1, 1]),
            DivisorClass::new(2, vec![0, 1, 1, 1, 0, 0]),
            DivisorClass::new(5, vec![2, 1, 1, 1, 1, 1]),
            DivisorClass::new(4, vec![2, 2, 1, 0, 1, 1]),
        ];
        for class in &classes {
            let base = h0(class, &cfg, 3).unwrap();
            for (i, &m) in class.multiplicities().iter().enumerate() {
                if m <= 0 {
                    continue;
                }
                let mut weaker = class.multiplicities().to_vec();
                weaker[i] -= 1;
                let relaxed = DivisorClass::new(class.degree(), weaker);
                assert!(h0(&relaxed, &cfg, 3).unwrap() >= base);
            }
        }
    }

    #[test]
    fn expected_dimension_oracle_small_degrees() {
        // for general position and degree <= 3, h0 equals the naive count
        // max(0, (d+1)(d+2)/2 - sum m(m+1)/2); the classes below avoid the
        // classical exceptional cases (two or more double points on a conic)
        let s = BlowupSurface::general(4);
        let cfg = cfg_for(&s);
        for d in 0..=3i64 {
            for m1 in 0..=2i64 {
                for m2 in 0..=1i64 {
                    let class = DivisorClass::new(d, vec![m1, m2, 1, 0]);
                    let naive = (d + 1) * (d + 2) / 2 - m1 * (m1 + 1) / 2 - m2 * (m2 + 1) / 2 - 1;
                    let expected = naive.max(0) as u64;
                    assert_eq!(h0(&class, &cfg, 3).unwrap(), expected, "class {class}");
                }
            }
        }
    }

    #[test]
    fn riemann_roch_on_del_pezzo_surfaces() {
        // for nef classes on a del Pezzo surface the higher cohomology
        // vanishes, so h0 = 1 + (D^2 - D.K)/2; an independent route to
        // the same numbers the interpolation matrix produces
        for n in [3usize, 4] {
            let s = BlowupSurface::general(n);
            let cfg = cfg_for(&s);
            let k = s.canonical_class();
            let mut nef_classes = vec![
                s.line(),
                s.line().scaled(2),
                -&k,
                (-&k).scaled(2),
                &s.pencil(0).unwrap() + &s.pencil(1).unwrap(),
                &s.line().scaled(2) - &s.exceptional(0).unwrap(),
            ];
            nef_classes.push(&(-&k) + &s.pencil(1).unwrap());
            for class in &nef_classes {
                let expected = 1 + (class.self_intersection() - class.intersect(&k).unwrap()) / 2;
                assert_eq!(
                    h0(class, &cfg, 3).unwrap(),
                    expected as u64,
                    "class {class} on the {n}-point surface"
                );
            }
        }
    }

    #[test]
    fn transported_class_with_positive_tail_is_rejected() {
        let s = y3();
        let cfg = cfg_for(&s);
        let padded = DivisorClass::new(2, vec![0, 1, 1, 1]);
        assert!(matches!(
            h0(&padded, &cfg, 1),
            Err(LinsysError::MissingCoordinates { point: 4, mult: 1 })
        ));
        let harmless = DivisorClass::new(2, vec![0, 1, 1, -2]);
        assert_eq!(h0(&harmless, &cfg, 1).unwrap(), 4);
    }

    #[test]
    fn nef_and_big_flags() {
        let s = y3();
        let cfg = cfg_for(&s);
        let catalog = negative_curve_catalog(&cfg, 3).unwrap();
        // e1, e2, e3, h12, h13, h23
        assert_eq!(catalog.entries().len(), 6);
        for (name, class) in catalog.entries() {
            assert!(class.self_intersection() < 0, "{name}");
            assert!(h0(class, &cfg, 3).unwrap() >= 1, "{name}");
        }

        let m = &(&s.pencil(0).unwrap() + &s.pencil(1).unwrap().scaled(3))
            + &s.pencil(2).unwrap().scaled(3);
        let flags = is_nef_big(&m, &catalog).unwrap();
        assert!(flags.nef && flags.big);
        assert_eq!(m.self_intersection(), 30);

        let e1 = s.exceptional(0).unwrap();
        let flags = is_nef_big(&e1, &catalog).unwrap();
        assert!(!flags.nef && !flags.big);
    }

    #[test]
    fn nef_and_big_on_the_infinitely_near_surface() {
        let s = ybar4();
        let cfg = cfg_for(&s);
        let catalog = negative_curve_catalog(&cfg, 3).unwrap();
        // fbar1 + 3 fbar2 + 3 fbar3 - ebar4 - 2 ebar4'
        let m = DivisorClass::new(7, vec![1, 3, 3, 1, 1]);
        assert_eq!(m.self_intersection(), 28);
        let flags = is_nef_big(&m, &catalog).unwrap();
        assert!(flags.nef && flags.big);
    }
}
