//! Branch components and their declared incidences.
//!
//! Components are tracked individually, not just as summed classes, so
//! that double-point counting and smoothness checks stay exact. A
//! component is identified by what it is (a line through a set of base
//! points, a general pencil member, or the strict exceptional curve over a
//! point); its divisor class is always recomputed from the identity and
//! the current surface, so blow-ups can never leave a stale class behind.

use std::collections::BTreeSet;
use std::fmt;

use crate::picard::{BlowupSurface, DivisorClass, PicardError};

/// Identity of an irreducible branch component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentId {
    /// A line constrained through the given proper points. With two or
    /// more points the line is determined and `member` must be 0; with
    /// fewer, `member` distinguishes different general members of the
    /// same pencil.
    Curve {
        through: BTreeSet<usize>,
        member: u32,
    },
    /// The strict transform of the exceptional curve over a point.
    ExcCurve { point: usize },
}

impl ComponentId {
    pub fn pencil_member(base: usize, member: u32) -> Self {
        ComponentId::Curve {
            through: BTreeSet::from([base]),
            member,
        }
    }

    pub fn line_through(points: &[usize]) -> Self {
        ComponentId::Curve {
            through: points.iter().copied().collect(),
            member: 0,
        }
    }

    pub fn exceptional(point: usize) -> Self {
        ComponentId::ExcCurve { point }
    }

    /// Divisor class of the component on the given surface.
    pub fn class_on(&self, surface: &BlowupSurface) -> Result<DivisorClass, PicardError> {
        match self {
            ComponentId::Curve { through, member } => match through.len() {
                0 => Ok(surface.line()),
                1 => surface.pencil(*through.first().unwrap()),
                _ => {
                    if *member != 0 {
                        return Err(PicardError::InvalidSurface(
                            "a determined line cannot carry a member index".into(),
                        ));
                    }
                    let pts: Vec<usize> = through.iter().copied().collect();
                    surface.line_through(&pts)
                }
            },
            ComponentId::ExcCurve { point } => surface.strict_exceptional(*point),
        }
    }

    /// Records that the component passes through a newly blown-up proper
    /// point. Determined lines absorb the point and stay determined.
    pub fn constrain_through(&mut self, point: usize) {
        if let ComponentId::Curve { through, member } = self {
            through.insert(point);
            if through.len() >= 2 {
                *member = 0;
            }
        }
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentId::Curve { through, member } => match through.len() {
                0 => write!(out, "g{member}"),
                1 => write!(out, "f{}_{member}", through.first().unwrap() + 1),
                _ => {
                    write!(out, "h")?;
                    for p in through {
                        write!(out, "{}", p + 1)?;
                    }
                    Ok(())
                }
            },
            ComponentId::ExcCurve { point } => write!(out, "e{}", point + 1),
        }
    }
}

/// Pretty name of a component, disambiguating strict exceptionals that
/// actually differ from the total transform.
pub fn component_label(id: &ComponentId, surface: &BlowupSurface) -> String {
    match id {
        ComponentId::ExcCurve { point } if !surface.children(*point).is_empty() => {
            format!("ebar{}", point + 1)
        }
        other => other.to_string(),
    }
}

/// A declared special point of the arrangement: several components meeting
/// at one place. Everything not declared here meets transversally at
/// distinct general points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPoint {
    /// References into the branch data: `(sigma, index within D_sigma)`.
    pub refs: Vec<(super::group::Sigma, usize)>,
    /// Whether all components meet pairwise transversally there. A
    /// non-transverse declaration means a simple tangency, local
    /// intersection multiplicity 2 per pair.
    pub transverse: bool,
}
