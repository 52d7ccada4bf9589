//! Divisor-class arithmetic on iterated blow-ups of the projective plane.
//!
//! A surface is described combinatorially: an ordered list of blown-up
//! points, each either a proper point of the plane or infinitely near a
//! previously blown-up point, plus collinearity constraints. Classes are
//! stored in the total-transform basis `l, e_1, ..., e_n`, which keeps the
//! intersection form diagonal (`l^2 = 1`, `e_i^2 = -1`) no matter how the
//! points are stacked. Strict transforms and strict exceptionals are
//! derived named classes, never a separate basis.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PicardError {
    #[error("class vectors live on different surfaces ({0} vs {1} exceptional coordinates)")]
    DimensionMismatch(usize, usize),
    #[error("point P{0} does not exist on this surface")]
    UnknownPoint(usize),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("line through {0:?} needs those points declared collinear")]
    NotCollinear(Vec<usize>),
    #[error("the line through {0:?} passes through the whole collinear group {1:?}; name it by the full group")]
    PartialCollinearGroup(Vec<usize>, Vec<usize>),
    #[error("named class `{0}` is not recognised")]
    UnknownName(String),
    #[error("surface is not an extension of the base surface: {0}")]
    NotAnExtension(String),
}

/// Symbolic tangent direction of an infinitely near point. Resolved to a
/// concrete slope only when a configuration is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentTag {
    /// Direction of the line from the parent towards another proper point.
    Toward(usize),
    /// A general direction, distinct from every constrained one.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Proper,
    InfinitelyNear {
        parent: usize,
        direction: TangentTag,
    },
}

/// An ordered blow-up tree over the plane with point constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSurface {
    points: Vec<PointKind>,
    collinear_groups: Vec<Vec<usize>>,
}

impl BlowupSurface {
    /// Blow-up at `n` proper points in general position.
    pub fn general(n: usize) -> Self {
        BlowupSurface {
            points: vec![PointKind::Proper; n],
            collinear_groups: Vec::new(),
        }
    }

    pub fn new(
        points: Vec<PointKind>,
        collinear_groups: Vec<Vec<usize>>,
    ) -> Result<Self, PicardError> {
        let s = BlowupSurface {
            points,
            collinear_groups,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), PicardError> {
        for (i, kind) in self.points.iter().enumerate() {
            if let PointKind::InfinitelyNear { parent, direction } = kind {
                if *parent >= i {
                    return Err(PicardError::InvalidSurface(format!(
                        "P{} is infinitely near P{}, which is not an earlier point",
                        i + 1,
                        parent + 1
                    )));
                }
                if !matches!(self.points[*parent], PointKind::Proper) {
                    return Err(PicardError::InvalidSurface(format!(
                        "P{} is infinitely near the non-proper point P{}; only first-order \
                         infinitely near points are supported",
                        i + 1,
                        parent + 1
                    )));
                }
                if let TangentTag::Toward(j) = direction {
                    if *j >= self.points.len() || !matches!(self.points[*j], PointKind::Proper) {
                        return Err(PicardError::InvalidSurface(format!(
                            "tangent target P{} of P{} must be an existing proper point",
                            j + 1,
                            i + 1
                        )));
                    }
                    if j == parent {
                        return Err(PicardError::InvalidSurface(format!(
                            "tangent target of P{} coincides with its parent",
                            i + 1
                        )));
                    }
                }
            }
        }
        for group in &self.collinear_groups {
            if group.len() < 3 {
                return Err(PicardError::InvalidSurface(
                    "collinear groups need at least 3 members".into(),
                ));
            }
            let set: BTreeSet<usize> = group.iter().copied().collect();
            if set.len() != group.len() {
                return Err(PicardError::InvalidSurface(
                    "collinear group repeats a point".into(),
                ));
            }
            for &i in group {
                if i >= self.points.len() {
                    return Err(PicardError::UnknownPoint(i + 1));
                }
                if !matches!(self.points[i], PointKind::Proper) {
                    return Err(PicardError::InvalidSurface(format!(
                        "collinear group contains the infinitely near point P{}",
                        i + 1
                    )));
                }
            }
        }
        for (a, ga) in self.collinear_groups.iter().enumerate() {
            for gb in self.collinear_groups.iter().skip(a + 1) {
                let sa: BTreeSet<_> = ga.iter().collect();
                let common = gb.iter().filter(|i| sa.contains(i)).count();
                if common >= 2 {
                    return Err(PicardError::InvalidSurface(
                        "two collinear groups share two points, so they describe one line".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[PointKind] {
        &self.points
    }

    pub fn collinear_groups(&self) -> &[Vec<usize>] {
        &self.collinear_groups
    }

    pub fn is_proper(&self, i: usize) -> bool {
        matches!(self.points.get(i), Some(PointKind::Proper))
    }

    /// Children of `i`, i.e. points infinitely near to it.
    pub fn children(&self, i: usize) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(c, k)| match k {
                PointKind::InfinitelyNear { parent, .. } if *parent == i => Some(c),
                _ => None,
            })
            .collect()
    }

    /// The declared collinear group containing all of `set`, if any.
    fn group_containing(&self, set: &BTreeSet<usize>) -> Option<&Vec<usize>> {
        self.collinear_groups
            .iter()
            .find(|g| set.iter().all(|i| g.contains(i)))
    }

    /// Appends a proper point, returning its index.
    pub fn push_proper(&mut self) -> usize {
        self.points.push(PointKind::Proper);
        self.points.len() - 1
    }

    /// Appends an infinitely near point over `parent`.
    pub fn push_infinitely_near(
        &mut self,
        parent: usize,
        direction: TangentTag,
    ) -> Result<usize, PicardError> {
        self.points
            .push(PointKind::InfinitelyNear { parent, direction });
        let idx = self.points.len() - 1;
        self.validate()?;
        Ok(idx)
    }

    /// Declares a collinearity constraint among proper points.
    pub fn add_collinear_group(&mut self, group: Vec<usize>) -> Result<(), PicardError> {
        self.collinear_groups.push(group);
        self.validate()
    }

    /// Records that the given proper points lie on one line, merging with
    /// any declared group that shares two or more of them (two common
    /// points already force the same line). No-op for fewer than three
    /// points.
    pub fn ensure_collinear(&mut self, points: &BTreeSet<usize>) -> Result<(), PicardError> {
        if points.len() < 3 {
            return Ok(());
        }
        let mut merged: BTreeSet<usize> = points.clone();
        let mut rest = Vec::new();
        for group in std::mem::take(&mut self.collinear_groups) {
            let common = group.iter().filter(|i| merged.contains(i)).count();
            if common >= 2 {
                merged.extend(group);
            } else {
                rest.push(group);
            }
        }
        rest.push(merged.into_iter().collect());
        self.collinear_groups = rest;
        self.validate()
    }

    /// The zero class on this surface.
    pub fn zero(&self) -> DivisorClass {
        DivisorClass::new(0, vec![0; self.points.len()])
    }

    /// Class of the pullback of a general line.
    pub fn line(&self) -> DivisorClass {
        DivisorClass::new(1, vec![0; self.points.len()])
    }

    /// Total transform `e_i` of the exceptional divisor over `P_i`.
    pub fn exceptional(&self, i: usize) -> Result<DivisorClass, PicardError> {
        if i >= self.points.len() {
            return Err(PicardError::UnknownPoint(i + 1));
        }
        let mut m = vec![0; self.points.len()];
        m[i] = -1;
        Ok(DivisorClass::new(0, m))
    }

    /// Strict transform of the exceptional curve over `P_i`: the total
    /// transform minus the exceptionals of all points infinitely near `P_i`.
    pub fn strict_exceptional(&self, i: usize) -> Result<DivisorClass, PicardError> {
        let mut c = self.exceptional(i)?;
        for child in self.children(i) {
            c = c.checked_sub(&self.exceptional(child)?)?;
        }
        Ok(c)
    }

    /// Class of a general member of the pencil `|l - e_i|` of lines
    /// through `P_i`.
    pub fn pencil(&self, i: usize) -> Result<DivisorClass, PicardError> {
        if i >= self.points.len() {
            return Err(PicardError::UnknownPoint(i + 1));
        }
        let mut m = vec![0; self.points.len()];
        m[i] = 1;
        Ok(DivisorClass::new(1, m))
    }

    /// Strict transform of the line through the given proper points.
    ///
    /// Subtracts `e_i` for each named point, plus the exceptional of every
    /// infinitely near point whose tangent direction runs along this line
    /// (parent and target both named). Three or more points must be
    /// declared collinear; two points must not be a proper subset of a
    /// declared group, because the actual line would pass through the
    /// whole group.
    pub fn line_through(&self, pts: &[usize]) -> Result<DivisorClass, PicardError> {
        let set: BTreeSet<usize> = pts.iter().copied().collect();
        if set.len() != pts.len() || set.len() < 2 {
            return Err(PicardError::InvalidSurface(format!(
                "a determined line needs at least two distinct points, got {pts:?}"
            )));
        }
        for &i in &set {
            if i >= self.points.len() {
                return Err(PicardError::UnknownPoint(i + 1));
            }
            if !matches!(self.points[i], PointKind::Proper) {
                return Err(PicardError::InvalidSurface(format!(
                    "line through P{} is not determined: the point is infinitely near",
                    i + 1
                )));
            }
        }
        if set.len() >= 3 && self.group_containing(&set).is_none() {
            return Err(PicardError::NotCollinear(
                set.iter().map(|i| i + 1).collect(),
            ));
        }
        if set.len() == 2 {
            if let Some(g) = self.group_containing(&set) {
                return Err(PicardError::PartialCollinearGroup(
                    set.iter().map(|i| i + 1).collect(),
                    g.iter().map(|i| i + 1).collect(),
                ));
            }
        }
        let mut m = vec![0i64; self.points.len()];
        for &i in &set {
            m[i] = 1;
        }
        for (c, kind) in self.points.iter().enumerate() {
            if let PointKind::InfinitelyNear {
                parent,
                direction: TangentTag::Toward(j),
            } = kind
            {
                if set.contains(parent) && set.contains(j) {
                    m[c] = 1;
                }
            }
        }
        Ok(DivisorClass::new(1, m))
    }

    /// The canonical class `K = -3l + sum e_i`.
    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass::new(-3, vec![-1; self.points.len()])
    }

    /// `true` if this surface is `base` with extra points appended. Every
    /// base constraint must survive (possibly grown by new points), and a
    /// constraint may not force three or more previously free points onto
    /// one line.
    pub fn extends(&self, base: &BlowupSurface) -> bool {
        if self.points.len() < base.points.len() {
            return false;
        }
        if self.points[..base.points.len()] != base.points[..] {
            return false;
        }
        let n_old = base.points.len();
        for g in &base.collinear_groups {
            let survives = self.collinear_groups.iter().any(|big| {
                let set: BTreeSet<usize> = big.iter().copied().collect();
                g.iter().all(|i| set.contains(i))
            });
            if !survives {
                return false;
            }
        }
        for g in &self.collinear_groups {
            let old: Vec<usize> = g.iter().copied().filter(|&i| i < n_old).collect();
            if old.len() <= 2 {
                continue;
            }
            let was_declared = base.collinear_groups.iter().any(|bg| {
                let set: BTreeSet<usize> = bg.iter().copied().collect();
                old.iter().all(|i| set.contains(i))
            });
            if !was_declared {
                return false;
            }
        }
        true
    }

    /// Resolves a textual class name from the catalog: `l`, `K`, `e3`,
    /// `ebar4`, `f2`, `h14`, `h23456`.
    pub fn named_class(&self, name: &str) -> Result<DivisorClass, PicardError> {
        let name = name.trim();
        match name {
            "l" => return Ok(self.line()),
            "K" => return Ok(self.canonical_class()),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix("ebar") {
            let i = parse_point(rest).ok_or_else(|| PicardError::UnknownName(name.into()))?;
            return self.strict_exceptional(i);
        }
        if let Some(rest) = name.strip_prefix('e') {
            let i = parse_point(rest).ok_or_else(|| PicardError::UnknownName(name.into()))?;
            return self.exceptional(i);
        }
        if let Some(rest) = name.strip_prefix('f') {
            let i = parse_point(rest).ok_or_else(|| PicardError::UnknownName(name.into()))?;
            return self.pencil(i);
        }
        if let Some(rest) = name.strip_prefix('h') {
            if !rest.is_empty() && rest.chars().all(|c| ('1'..='9').contains(&c)) {
                let pts: Vec<usize> = rest
                    .chars()
                    .map(|c| c.to_digit(10).unwrap() as usize - 1)
                    .collect();
                return self.line_through(&pts);
            }
        }
        Err(PicardError::UnknownName(name.into()))
    }
}

fn parse_point(s: &str) -> Option<usize> {
    let n: usize = s.parse().ok()?;
    n.checked_sub(1)
}

/// A divisor class `d*l - sum_i m_i e_i` in the total-transform basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    d: i64,
    m: Vec<i64>,
}

impl DivisorClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        DivisorClass { d, m }
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    /// Multiplicity coefficients: the class is `d*l - sum m_i e_i`.
    pub fn multiplicities(&self) -> &[i64] {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.m.iter().all(|&x| x == 0)
    }

    /// Intersection number in the diagonal form:
    /// `a.d*b.d - sum a.m_i*b.m_i`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<i64, PicardError> {
        if self.m.len() != other.m.len() {
            return Err(PicardError::DimensionMismatch(self.m.len(), other.m.len()));
        }
        let mut acc = self.d * other.d;
        for (a, b) in self.m.iter().zip(&other.m) {
            acc -= a * b;
        }
        Ok(acc)
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self).expect("same surface")
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass, PicardError> {
        if self.m.len() != other.m.len() {
            return Err(PicardError::DimensionMismatch(self.m.len(), other.m.len()));
        }
        Ok(DivisorClass {
            d: self.d + other.d,
            m: self.m.iter().zip(&other.m).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass, PicardError> {
        self.checked_add(&other.scaled(-1))
    }

    pub fn scaled(&self, k: i64) -> DivisorClass {
        DivisorClass {
            d: self.d * k,
            m: self.m.iter().map(|x| x * k).collect(),
        }
    }

    /// Componentwise divisibility by `k`, used for `3L = D` relations.
    pub fn divided_exactly(&self, k: i64) -> Option<DivisorClass> {
        if self.d % k != 0 || self.m.iter().any(|x| x % k != 0) {
            return None;
        }
        Some(DivisorClass {
            d: self.d / k,
            m: self.m.iter().map(|x| x / k).collect(),
        })
    }

    /// Embeds the class into an extension of its surface by padding the
    /// new exceptional coordinates with zeros. Intersection numbers are
    /// preserved because the added basis vectors are orthogonal.
    pub fn pullback_to(
        &self,
        base: &BlowupSurface,
        extension: &BlowupSurface,
    ) -> Result<DivisorClass, PicardError> {
        if self.m.len() != base.point_count() {
            return Err(PicardError::DimensionMismatch(
                self.m.len(),
                base.point_count(),
            ));
        }
        if !extension.extends(base) {
            return Err(PicardError::NotAnExtension(format!(
                "{} points do not extend {} points with matching structure",
                extension.point_count(),
                base.point_count()
            )));
        }
        let mut m = self.m.clone();
        m.resize(extension.point_count(), 0);
        Ok(DivisorClass { d: self.d, m })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({};", self.d)?;
        for (i, v) in self.m.iter().enumerate() {
            if i > 0 {
                write!(out, ",")?;
            }
            write!(out, "{v}")?;
        }
        write!(out, ")")
    }
}

impl std::ops::Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_add(rhs).expect("same surface")
    }
}

impl std::ops::Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.checked_sub(rhs).expect("same surface")
    }
}

impl std::ops::Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scaled(-1)
    }
}
