//! The line-oriented construction spec format.
//!
//! A spec file is a versioned header followed by sections:
//!
//! ```text
//! tricover-spec v1
//!
//! [surface]
//! points = 5
//! near = 5 4 toward 1
//!
//! [branch]
//! D01 = f1_1 + ebar4
//! D02 = h14 : (1; 1,0,0,1,1)
//!
//! [bundles]
//! L10 = (3; 0,1,2,1,0)
//!
//! [analysis]
//! subgroup = 10
//!
//! [expected]
//! row = 28 5 0 8 4
//! census = 16 4
//! ```
//!
//! See `docs/spec-format.md` for the grammar. Unknown sections or keys are
//! rejected; the `[branch]`/`[bundles]`/`[analysis]` sections may be
//! omitted for surface-only files used with the `h0` command.

use std::collections::BTreeMap;

use tricover::constructions::{ConstructionSpec, TableRow};
use tricover::cover::{component_label, BuildingDataZ32, Chi, ComponentId, Sigma, Subgroup};
use tricover::picard::{BlowupSurface, DivisorClass, PointKind, TangentTag};

use crate::expr::parse_class_expr;

pub const SPEC_VERSION: &str = "tricover-spec v1";

#[derive(Debug)]
pub struct SpecError {
    pub line: Option<usize>,
    pub message: String,
}

impl SpecError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        SpecError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        SpecError {
            line: None,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(out, "line {line}: {}", self.message),
            None => write!(out, "{}", self.message),
        }
    }
}

impl std::error::Error for SpecError {}

/// A parsed spec file; heavier validation happens in
/// [`RawSpec::into_construction`].
#[derive(Debug, Clone)]
pub struct RawSpec {
    pub surface: BlowupSurface,
    pub branch: Option<BTreeMap<Sigma, Vec<ComponentId>>>,
    pub bundles: Option<BTreeMap<Chi, DivisorClass>>,
    pub subgroup: Option<Subgroup>,
    pub summand: Option<DivisorClass>,
    pub prime: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<u32>,
    pub expected_row: Option<TableRow>,
    pub expected_census: Option<(i64, i64)>,
}

pub fn parse_spec(text: &str) -> Result<RawSpec, SpecError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, header)) if header == SPEC_VERSION => {}
        Some((n, header)) => {
            return Err(SpecError::at(
                n,
                format!("unsupported header `{header}`, expected `{SPEC_VERSION}`"),
            ))
        }
        None => return Err(SpecError::general("empty spec file")),
    }

    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        Surface,
        Branch,
        Bundles,
        Analysis,
        Expected,
    }

    let mut section: Option<Section> = None;
    let mut point_count: Option<usize> = None;
    let mut collinear: Vec<Vec<usize>> = Vec::new();
    let mut near: Vec<(usize, usize, TangentTag)> = Vec::new();
    let mut branch_lines: Vec<(usize, Sigma, String)> = Vec::new();
    let mut bundle_lines: Vec<(usize, Chi, String)> = Vec::new();
    let mut saw_branch = false;
    let mut saw_bundles = false;
    let mut subgroup = None;
    let mut summand_line: Option<(usize, String)> = None;
    let mut prime = None;
    let mut seed = None;
    let mut trials = None;
    let mut expected_row = None;
    let mut expected_census = None;

    for (n, line) in lines {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = Some(match name {
                "surface" => Section::Surface,
                "branch" => {
                    saw_branch = true;
                    Section::Branch
                }
                "bundles" => {
                    saw_bundles = true;
                    Section::Bundles
                }
                "analysis" => Section::Analysis,
                "expected" => Section::Expected,
                other => return Err(SpecError::at(n, format!("unknown section `[{other}]`"))),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(SpecError::at(
                n,
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(section) = section else {
            return Err(SpecError::at(n, "key outside of any section"));
        };
        match section {
            Section::Surface => match key {
                "points" => {
                    point_count = Some(
                        value
                            .parse()
                            .map_err(|_| SpecError::at(n, format!("bad point count `{value}`")))?,
                    )
                }
                "collinear" => {
                    collinear.push(parse_points(value).map_err(|m| SpecError::at(n, m))?);
                }
                "near" => {
                    near.push(parse_near(value).map_err(|m| SpecError::at(n, m))?);
                }
                other => return Err(SpecError::at(n, format!("unknown surface key `{other}`"))),
            },
            Section::Branch => {
                let sigma = parse_sigma_key(key).ok_or_else(|| {
                    SpecError::at(n, format!("unknown branch key `{key}` (expected D01..D21)"))
                })?;
                if branch_lines.iter().any(|(_, s, _)| *s == sigma) {
                    return Err(SpecError::at(n, format!("duplicate branch key `{key}`")));
                }
                branch_lines.push((n, sigma, value.to_string()));
            }
            Section::Bundles => {
                let chi = parse_chi_key(key).ok_or_else(|| {
                    SpecError::at(n, format!("unknown bundle key `{key}` (expected L01..L21)"))
                })?;
                if bundle_lines.iter().any(|(_, c, _)| *c == chi) {
                    return Err(SpecError::at(n, format!("duplicate bundle key `{key}`")));
                }
                bundle_lines.push((n, chi, value.to_string()));
            }
            Section::Analysis => match key {
                "subgroup" => {
                    let digits: Vec<u8> = value
                        .chars()
                        .filter_map(|c| c.to_digit(10).map(|d| d as u8))
                        .collect();
                    if digits.len() != 2 || value.len() != 2 {
                        return Err(SpecError::at(
                            n,
                            format!("bad subgroup generator `{value}`"),
                        ));
                    }
                    let sigma = Sigma::new(digits[0], digits[1])
                        .map_err(|e| SpecError::at(n, e.to_string()))?;
                    subgroup = Some(Subgroup::generated_by(sigma));
                }
                "summand" => summand_line = Some((n, value.to_string())),
                "prime" => {
                    prime = Some(
                        value
                            .parse()
                            .map_err(|_| SpecError::at(n, format!("bad prime `{value}`")))?,
                    )
                }
                "seed" => {
                    seed = Some(
                        value
                            .parse()
                            .map_err(|_| SpecError::at(n, format!("bad seed `{value}`")))?,
                    )
                }
                "trials" => {
                    trials = Some(
                        value
                            .parse()
                            .map_err(|_| SpecError::at(n, format!("bad trial count `{value}`")))?,
                    )
                }
                other => return Err(SpecError::at(n, format!("unknown analysis key `{other}`"))),
            },
            Section::Expected => match key {
                "row" => {
                    let nums = parse_ints(value).map_err(|m| SpecError::at(n, m))?;
                    if nums.len() != 5 {
                        return Err(SpecError::at(n, "expected row needs 5 integers"));
                    }
                    if nums[1] < 0 {
                        return Err(SpecError::at(n, "geometric genus cannot be negative"));
                    }
                    expected_row = Some(TableRow {
                        k2: nums[0],
                        pg: nums[1] as u64,
                        q: nums[2],
                        deg_sigma: nums[3],
                        base_points: nums[4],
                    });
                }
                "census" => {
                    let nums = parse_ints(value).map_err(|m| SpecError::at(n, m))?;
                    if nums.len() != 2 {
                        return Err(SpecError::at(n, "expected census needs 2 integers"));
                    }
                    expected_census = Some((nums[0], nums[1]));
                }
                other => return Err(SpecError::at(n, format!("unknown expected key `{other}`"))),
            },
        }
    }

    let count = point_count.ok_or_else(|| SpecError::general("missing `points` in [surface]"))?;
    let mut points = vec![PointKind::Proper; count];
    for &(child, parent, direction) in &near {
        if child == 0 || child > count {
            return Err(SpecError::general(format!(
                "near point {child} out of range"
            )));
        }
        points[child - 1] = PointKind::InfinitelyNear {
            parent: parent - 1,
            direction,
        };
    }
    let groups: Vec<Vec<usize>> = collinear
        .iter()
        .map(|g| g.iter().map(|i| i - 1).collect())
        .collect();
    let surface = BlowupSurface::new(points, groups)
        .map_err(|e| SpecError::general(format!("invalid surface: {e}")))?;

    let branch = if saw_branch {
        let mut map: BTreeMap<Sigma, Vec<ComponentId>> = BTreeMap::new();
        for (n, sigma, text) in &branch_lines {
            let comps = parse_components(text, &surface).map_err(|m| SpecError::at(*n, m))?;
            map.insert(*sigma, comps);
        }
        Some(map)
    } else {
        None
    };

    let bundles = if saw_bundles {
        let mut map = BTreeMap::new();
        for (n, chi, text) in &bundle_lines {
            let class = parse_class_expr(text, &surface, None).map_err(|m| SpecError::at(*n, m))?;
            if class.multiplicities().len() != surface.point_count() {
                return Err(SpecError::at(*n, "bundle class has the wrong length"));
            }
            map.insert(*chi, class);
        }
        Some(map)
    } else {
        None
    };

    let summand = match summand_line {
        Some((n, text)) => Some(
            parse_class_expr(&text, &surface, bundles.as_ref()).map_err(|m| SpecError::at(n, m))?,
        ),
        None => None,
    };

    Ok(RawSpec {
        surface,
        branch,
        bundles,
        subgroup,
        summand,
        prime,
        seed,
        trials,
        expected_row,
        expected_census,
    })
}

impl RawSpec {
    /// Validates completeness and the invariants that make the data a
    /// plausible construction: all eight bundle classes present and
    /// nontrivial, branch reduced, component sums matching any declared
    /// class assertions.
    pub fn into_construction(self, name: &str) -> Result<ConstructionSpec, SpecError> {
        let branch = self
            .branch
            .ok_or_else(|| SpecError::general("missing [branch] section"))?;
        let bundles = self
            .bundles
            .ok_or_else(|| SpecError::general("missing [bundles] section"))?;
        let subgroup = self
            .subgroup
            .ok_or_else(|| SpecError::general("missing `subgroup` in [analysis]"))?;

        for chi in Chi::all() {
            let class = bundles.get(&chi).ok_or_else(|| {
                SpecError::general(format!("missing bundle class {chi} in [bundles]"))
            })?;
            if class.is_zero() {
                return Err(SpecError::general(format!("trivial bundle class {chi}")));
            }
        }

        let mut seen = std::collections::BTreeSet::new();
        for comps in branch.values() {
            for comp in comps {
                if !seen.insert(comp.clone()) {
                    return Err(SpecError::general(format!(
                        "branch not reduced: component {comp} appears twice"
                    )));
                }
            }
        }

        let data = BuildingDataZ32::new(self.surface, branch, bundles, Vec::new())
            .map_err(|e| SpecError::general(e.to_string()))?;

        Ok(ConstructionSpec {
            name: name.to_string(),
            data,
            subgroup,
            canonical_summand: self.summand,
            expected_row: self.expected_row,
            expected_census: self.expected_census,
            notes: Vec::new(),
        })
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => line[..pos].trim(),
        None => line.trim(),
    }
}

fn parse_points(value: &str) -> Result<Vec<usize>, String> {
    let pts: Vec<usize> = value
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| format!("bad point index `{s}`")))
        .collect::<Result<_, _>>()?;
    if pts.contains(&0) {
        return Err("point indices are 1-based".into());
    }
    Ok(pts)
}

fn parse_ints(value: &str) -> Result<Vec<i64>, String> {
    value
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| format!("bad integer `{s}`")))
        .collect()
}

/// `near = <child> <parent> toward <point>` or `near = <child> <parent> generic`.
fn parse_near(value: &str) -> Result<(usize, usize, TangentTag), String> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    match parts.as_slice() {
        [child, parent, "toward", target] => {
            let c: usize = child.parse().map_err(|_| "bad child index".to_string())?;
            let p: usize = parent.parse().map_err(|_| "bad parent index".to_string())?;
            let t: usize = target.parse().map_err(|_| "bad target index".to_string())?;
            if c == 0 || p == 0 || t == 0 {
                return Err("point indices are 1-based".into());
            }
            Ok((c, p, TangentTag::Toward(t - 1)))
        }
        [child, parent, "generic"] => {
            let c: usize = child.parse().map_err(|_| "bad child index".to_string())?;
            let p: usize = parent.parse().map_err(|_| "bad parent index".to_string())?;
            if c == 0 || p == 0 {
                return Err("point indices are 1-based".into());
            }
            Ok((c, p, TangentTag::Generic))
        }
        _ => Err(format!(
            "bad near declaration `{value}` (expected `<child> <parent> toward <point>` or `<child> <parent> generic`)"
        )),
    }
}

fn parse_sigma_key(key: &str) -> Option<Sigma> {
    let digits = key.strip_prefix('D')?;
    if digits.len() != 2 {
        return None;
    }
    let mut it = digits.chars().map(|c| c.to_digit(10).map(|d| d as u8));
    let a = it.next()??;
    let b = it.next()??;
    Sigma::new(a, b).ok()
}

fn parse_chi_key(key: &str) -> Option<Chi> {
    let digits = key.strip_prefix('L')?;
    if digits.len() != 2 {
        return None;
    }
    let mut it = digits.chars().map(|c| c.to_digit(10).map(|d| d as u8));
    let a = it.next()??;
    let b = it.next()??;
    Chi::new(a, b).ok()
}

/// Component list with an optional class assertion:
/// `h24 + f2_1 + f2_2 : (3; 0,3,0,1,0)`.
fn parse_components(text: &str, surface: &BlowupSurface) -> Result<Vec<ComponentId>, String> {
    let (list, assertion) = match text.split_once(':') {
        Some((l, a)) => (l.trim(), Some(a.trim())),
        None => (text.trim(), None),
    };
    let mut comps = Vec::new();
    if !list.is_empty() && list != "0" {
        for part in list.split('+') {
            comps.push(parse_component(part.trim(), surface)?);
        }
    }
    if let Some(assertion) = assertion {
        let stated = parse_class_expr(assertion, surface, None)?;
        let mut sum = surface.zero();
        for comp in &comps {
            let class = comp.class_on(surface).map_err(|e| e.to_string())?;
            sum = sum.checked_add(&class).map_err(|e| e.to_string())?;
        }
        if sum != stated {
            return Err(format!(
                "lattice inconsistency: components sum to {sum}, stated class is {stated}"
            ));
        }
    }
    for comp in &comps {
        comp.class_on(surface).map_err(|e| e.to_string())?;
    }
    Ok(comps)
}

fn parse_component(name: &str, surface: &BlowupSurface) -> Result<ComponentId, String> {
    if name.is_empty() {
        return Err("empty component name".into());
    }
    if let Some(rest) = name.strip_prefix("ebar").or_else(|| {
        name.strip_prefix('e')
            .filter(|r| r.chars().all(|c| c.is_ascii_digit()))
    }) {
        let idx: usize = rest
            .parse()
            .map_err(|_| format!("bad exceptional `{name}`"))?;
        if idx == 0 || idx > surface.point_count() {
            return Err(format!("point {idx} out of range"));
        }
        return Ok(ComponentId::exceptional(idx - 1));
    }
    if let Some(rest) = name.strip_prefix('h') {
        if !rest.is_empty() && rest.chars().all(|c| ('1'..='9').contains(&c)) {
            let pts: Vec<usize> = rest
                .chars()
                .map(|c| c.to_digit(10).unwrap() as usize - 1)
                .collect();
            let id = ComponentId::line_through(&pts);
            return Ok(id);
        }
    }
    if let Some(rest) = name.strip_prefix('f') {
        if let Some((base, member)) = rest.split_once('_') {
            let b: usize = base.parse().map_err(|_| format!("bad pencil `{name}`"))?;
            let m: u32 = member.parse().map_err(|_| format!("bad member `{name}`"))?;
            if b == 0 || b > surface.point_count() {
                return Err(format!("point {b} out of range"));
            }
            return Ok(ComponentId::pencil_member(b - 1, m));
        }
    }
    if let Some(rest) = name.strip_prefix('g') {
        if let Ok(m) = rest.parse::<u32>() {
            return Ok(ComponentId::Curve {
                through: Default::default(),
                member: m,
            });
        }
    }
    Err(format!(
        "unknown component `{name}` (expected f<i>_<m>, h<points>, e<i>, ebar<i> or g<m>)"
    ))
}

/// Renders a construction back to canonical spec text.
pub fn render_spec(spec: &ConstructionSpec, comment: &str) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let _ = writeln!(out, "{SPEC_VERSION}");
    if !comment.is_empty() {
        let _ = writeln!(out, "# {comment}");
    }
    let surface = &spec.data.surface;

    let _ = writeln!(out, "\n[surface]");
    let _ = writeln!(out, "points = {}", surface.point_count());
    for group in surface.collinear_groups() {
        let mut sorted: Vec<usize> = group.iter().map(|i| i + 1).collect();
        sorted.sort_unstable();
        let text: Vec<String> = sorted.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "collinear = {}", text.join(" "));
    }
    for (i, kind) in surface.points().iter().enumerate() {
        if let PointKind::InfinitelyNear { parent, direction } = kind {
            match direction {
                TangentTag::Toward(t) => {
                    let _ = writeln!(out, "near = {} {} toward {}", i + 1, parent + 1, t + 1);
                }
                TangentTag::Generic => {
                    let _ = writeln!(out, "near = {} {} generic", i + 1, parent + 1);
                }
            }
        }
    }

    let _ = writeln!(out, "\n[branch]");
    for sigma in Sigma::all() {
        let comps = spec.data.components(sigma);
        if comps.is_empty() {
            continue;
        }
        let (a, b) = sigma.parts();
        let names: Vec<String> = comps.iter().map(|c| component_label(c, surface)).collect();
        let class = spec.data.branch_class(sigma).expect("valid components");
        let _ = writeln!(out, "D{a}{b} = {} : {class}", names.join(" + "));
    }

    let _ = writeln!(out, "\n[bundles]");
    for chi in Chi::all() {
        let (a, b) = chi.parts();
        let _ = writeln!(out, "L{a}{b} = {}", spec.data.bundles[&chi]);
    }

    let _ = writeln!(out, "\n[analysis]");
    let (a, b) = spec.subgroup.generator().parts();
    let _ = writeln!(out, "subgroup = {a}{b}");
    if let Some(summand) = &spec.canonical_summand {
        let _ = writeln!(out, "summand = {summand}");
    }

    if spec.expected_row.is_some() || spec.expected_census.is_some() {
        let _ = writeln!(out, "\n[expected]");
        if let Some(row) = &spec.expected_row {
            let _ = writeln!(
                out,
                "row = {} {} {} {} {}",
                row.k2, row.pg, row.q, row.deg_sigma, row.base_points
            );
        }
        if let Some((n, m)) = &spec.expected_census {
            let _ = writeln!(out, "census = {n} {m}");
        }
    }
    out
}
