//! The group `Z_3 x Z_3`, its characters, cyclic subgroups and the
//! coefficient table of the reduced cover relations.
//!
//! Branch divisors are labelled by pairs (cyclic subgroup `H`, generator
//! `psi` of `H*`). For this group every such pair corresponds to exactly
//! one nonzero element `sigma`: `H = <sigma>` and `psi` the restriction of
//! the character with the same index. All bookkeeping below works with the
//! additive pairing `<chi, sigma> = chi_1*sigma_1 + chi_2*sigma_2 mod 3`,
//! writing characters additively as exponent vectors.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("({0},{1}) is not a nonzero element of Z3 x Z3")]
    NotNonzero(u8, u8),
    #[error("character {0} is trivial on the subgroup generated by {1}")]
    TrivialRestriction(Chi, Sigma),
    #[error("{0} does not generate the character group of <{1}>")]
    NotAGenerator(Chi, Sigma),
}

/// A nonzero group element, the label of a branch divisor `D_sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sigma(u8, u8);

/// A nonzero character, the label of a line bundle `L_chi`, written as an
/// exponent vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chi(u8, u8);

impl Sigma {
    pub fn new(a: u8, b: u8) -> Result<Self, GroupError> {
        let (a, b) = (a % 3, b % 3);
        if a == 0 && b == 0 {
            Err(GroupError::NotNonzero(a, b))
        } else {
            Ok(Sigma(a, b))
        }
    }

    pub fn parts(self) -> (u8, u8) {
        (self.0, self.1)
    }

    pub fn double(self) -> Sigma {
        Sigma((self.0 * 2) % 3, (self.1 * 2) % 3)
    }

    /// All eight nonzero elements in the conventional order
    /// `01, 02, 10, 20, 11, 22, 12, 21`.
    pub fn all() -> [Sigma; 8] {
        [
            Sigma(0, 1),
            Sigma(0, 2),
            Sigma(1, 0),
            Sigma(2, 0),
            Sigma(1, 1),
            Sigma(2, 2),
            Sigma(1, 2),
            Sigma(2, 1),
        ]
    }

    /// Canonical generator of `<sigma>`: the lexicographically smaller of
    /// `sigma` and `2*sigma`.
    pub fn subgroup(self) -> Subgroup {
        let d = self.double();
        Subgroup(if (self.0, self.1) <= (d.0, d.1) {
            self
        } else {
            d
        })
    }
}

impl Chi {
    pub fn new(a: u8, b: u8) -> Result<Self, GroupError> {
        let (a, b) = (a % 3, b % 3);
        if a == 0 && b == 0 {
            Err(GroupError::NotNonzero(a, b))
        } else {
            Ok(Chi(a, b))
        }
    }

    pub fn parts(self) -> (u8, u8) {
        (self.0, self.1)
    }

    /// `chi^2`, which is also `chi^{-1}`.
    pub fn square(self) -> Chi {
        Chi((self.0 * 2) % 3, (self.1 * 2) % 3)
    }

    /// Exponent of the character value on a group element.
    pub fn pair(self, sigma: Sigma) -> u8 {
        (self.0 * sigma.0 + self.1 * sigma.1) % 3
    }

    pub fn is_trivial_on(self, sigma: Sigma) -> bool {
        self.pair(sigma) == 0
    }

    /// The eight nontrivial characters, in the row order of the relation
    /// table: `10, 01, 20, 02, 11, 22, 12, 21`.
    pub fn all() -> [Chi; 8] {
        [
            Chi(1, 0),
            Chi(0, 1),
            Chi(2, 0),
            Chi(0, 2),
            Chi(1, 1),
            Chi(2, 2),
            Chi(1, 2),
            Chi(2, 1),
        ]
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "D{}{}", self.0, self.1)
    }
}

impl fmt::Display for Chi {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "L{}{}", self.0, self.1)
    }
}

/// A nontrivial cyclic subgroup, held as its canonical generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup(Sigma);

impl Subgroup {
    pub fn generated_by(sigma: Sigma) -> Subgroup {
        sigma.subgroup()
    }

    pub fn generator(self) -> Sigma {
        self.0
    }

    pub fn contains(self, sigma: Sigma) -> bool {
        sigma == self.0 || sigma == self.0.double()
    }

    /// The four nontrivial cyclic subgroups.
    pub fn all() -> [Subgroup; 4] {
        [
            Subgroup(Sigma(0, 1)),
            Subgroup(Sigma(1, 0)),
            Subgroup(Sigma(1, 1)),
            Subgroup(Sigma(1, 2)),
        ]
    }

    /// Characters trivial on this subgroup (the annihilator, minus the
    /// trivial character).
    pub fn perp(self) -> Vec<Chi> {
        Chi::all()
            .into_iter()
            .filter(|chi| chi.is_trivial_on(self.0))
            .collect()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.0.parts();
        write!(out, "<({a},{b})>")
    }
}

fn inv3(x: u8) -> u8 {
    // inverse mod 3 of 1 or 2
    debug_assert!(x == 1 || x == 2);
    x
}

/// Exponent `iota` with `chi|_H = psi^iota`, where `H = <tau>` and `psi`
/// is the restriction of the character indexed by `tau`. Zero means the
/// restriction is trivial.
pub fn restriction_exponent(chi: Chi, tau: Sigma) -> u8 {
    let chi_on_gen = chi.pair(tau);
    let psi_on_gen = Chi(tau.0, tau.1).pair(tau);
    // psi_on_gen is never 0: squares mod 3 sum to 1 or 2 for tau != 0
    (chi_on_gen * inv3(psi_on_gen)) % 3
}

/// The branching coefficient `epsilon` for a pair of characters on the
/// divisor labelled by `tau = (H, psi)`: zero when the two restriction
/// exponents sum below the order of `H`, one otherwise. Both restrictions
/// must be nontrivial and `psi` is required to generate `H*`, which is
/// automatic for the labels used here.
pub fn epsilon(chi: Chi, chi_prime: Chi, tau: Sigma) -> Result<u8, GroupError> {
    let psi_on_gen = Chi(tau.0, tau.1).pair(tau);
    if psi_on_gen == 0 {
        return Err(GroupError::NotAGenerator(Chi(tau.0, tau.1), tau));
    }
    let i1 = restriction_exponent(chi, tau);
    let i2 = restriction_exponent(chi_prime, tau);
    if i1 == 0 {
        return Err(GroupError::TrivialRestriction(chi, tau));
    }
    if i2 == 0 {
        return Err(GroupError::TrivialRestriction(chi_prime, tau));
    }
    Ok(if (i1 + i2) < 3 { 0 } else { 1 })
}

/// The 8x8 table of coefficients of each `D_sigma` in `3L_chi`, derived by
/// telescoping the fundamental relations: adding the relation for
/// `(chi, chi)` to the one for `(chi, chi^2)` eliminates the intermediate
/// bundles, because `L_{chi^3}` is trivial. Rows follow `Chi::all()`,
/// columns follow `Sigma::all()`.
pub fn derive_reduced_relations() -> [[i64; 8]; 8] {
    let mut table = [[0i64; 8]; 8];
    for (r, chi) in Chi::all().into_iter().enumerate() {
        for (c, tau) in Sigma::all().into_iter().enumerate() {
            let i1 = restriction_exponent(chi, tau);
            if i1 == 0 {
                continue; // chi trivial on <tau>: no contribution
            }
            let e1 = epsilon(chi, chi, tau).expect("nontrivial by construction");
            let e2 = epsilon(chi, chi.square(), tau).expect("nontrivial by construction");
            table[r][c] = (e1 + e2) as i64;
        }
    }
    table
}

/// Coefficient of `D_sigma` in the relation for `3L_chi`.
pub fn relation_coefficient(chi: Chi, sigma: Sigma) -> i64 {
    restriction_exponent(chi, sigma) as i64
}
