//! Characters `Λ_{A'} → {±1}` and the étale double covers `V/ker χ → A′`.

use std::fmt;

use num::{BigInt, Integer};
use thiserror::Error;

use crate::appell_humbert::{self, im_on_lattice, pullback_hom, HermitianForm, LineBundleClass, SIGN_PATTERNS};
use crate::eisenstein::{rat, EisMatrix};
use crate::lattice::{curve_lattice, product_lattice, AmbientVector, LatticeBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("the trivial character has no index-2 kernel")]
    TrivialCharacter,
    #[error("vector {0} is not in the product lattice")]
    NotInLattice(String),
}

/// A character on `(λ₁, λ₂, e₁, e₂)`; `flips[j]` means the value `−1` on the j-th generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterMod2 {
    pub flips: [bool; 4],
}

impl fmt::Debug for CharacterMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CharacterMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.flips.iter().map(|&b| if b { "-1" } else { "1" }).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl CharacterMod2 {
    pub fn from_signs(s: [i8; 4]) -> Self {
        CharacterMod2 { flips: s.map(|x| x < 0) }
    }

    pub fn trivial() -> Self {
        CharacterMod2 { flips: [false; 4] }
    }

    pub fn is_trivial(&self) -> bool {
        !self.flips.iter().any(|&b| b)
    }

    pub fn signs(&self) -> [i8; 4] {
        self.flips.map(|b| if b { -1 } else { 1 })
    }

    pub fn mul(&self, o: &CharacterMod2) -> Self {
        CharacterMod2 { flips: std::array::from_fn(|i| self.flips[i] ^ o.flips[i]) }
    }

    /// Value on coordinates in the product basis, by parity.
    pub fn eval_coords(&self, n: &[BigInt]) -> i8 {
        let odd = n
            .iter()
            .zip(self.flips)
            .filter(|(k, f)| *f && k.is_odd())
            .count();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn eval(&self, v: &AmbientVector) -> Result<i8, CoverError> {
        let n = product_lattice().coords(v).ok_or_else(|| CoverError::NotInLattice(v.to_string()))?;
        Ok(self.eval_coords(&n))
    }

    /// Position in [`all_characters`]: 0 for the trivial one, else its label.
    pub fn label(&self) -> usize {
        all_characters().iter().position(|c| c == self).expect("every pattern is listed")
    }
}

/// `χ₀` followed by `χ₁ … χ₁₅` in the fixed labelling order.
pub fn all_characters() -> Vec<CharacterMod2> {
    std::iter::once(CharacterMod2::trivial())
        .chain(SIGN_PATTERNS.iter().map(|&s| CharacterMod2::from_signs(s)))
        .collect()
}

/// A basis of `ker χ`: `2b_p` for the first flipped generator `b_p`, and `b_j + [χ(b_j) = −1]·b_p` otherwise.
pub fn kernel_lattice(chi: &CharacterMod2) -> Result<LatticeBasis, CoverError> {
    let p = chi.flips.iter().position(|&b| b).ok_or(CoverError::TrivialCharacter)?;
    let base = product_lattice();
    let b = base.vectors();
    let v = (0..4)
        .map(|j| {
            if j == p {
                b[p].scale(&rat(2))
            } else if chi.flips[j] {
                b[j].add(&b[p])
            } else {
                b[j].clone()
            }
        })
        .collect();
    Ok(LatticeBasis::new(v).expect("kernel basis is independent"))
}

pub fn restricts_nontrivially(chi: &CharacterMod2, sub: &LatticeBasis) -> bool {
    sub.vectors().iter().any(|v| chi.eval(v).expect("sublattice of the product lattice") < 0)
}

/// Coordinates mod 2 of a lattice vector of the product lattice.
fn parity(v: &AmbientVector) -> [u8; 4] {
    let n = product_lattice().coords(v).expect("vector in the product lattice");
    std::array::from_fn(|i| if n[i].is_odd() { 1 } else { 0 })
}

/// Mod-2 reductions of the curve lattice `Λ_k`, i.e. the 2-torsion points `λ/2` lying on `E_k′`.
pub fn curve_two_torsion(k: usize) -> Vec<[u8; 4]> {
    let l = curve_lattice(k);
    let mut pts: Vec<[u8; 4]> = [[0i64, 0], [1, 0], [0, 1], [1, 1]]
        .iter()
        .map(|c| parity(&l.combine(&[BigInt::from(c[0]), BigInt::from(c[1])])))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Outcome of testing every nontrivial character against the four curve lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Labels of characters nontrivial on all four `Λ_k`.
    pub admissible: Vec<usize>,
    /// `(label, curves on which χ is trivial)` for the rest.
    pub witnesses: Vec<(usize, Vec<usize>)>,
    /// For each 2-torsion point (as parity of `λ` on the product basis), the curves through it.
    pub incidence: Vec<([u8; 4], Vec<usize>)>,
    /// Nonzero 2-torsion points on each curve.
    pub points_per_curve: [usize; 4],
    /// Nonzero 2-torsion points on none of the curves.
    pub leftover: Vec<[u8; 4]>,
    /// Labels of the characters `(−1)^{Im Θ(·, λ)}` attached to the leftover points.
    pub leftover_characters: Vec<usize>,
}

pub fn classify_characters() -> Classification {
    let chars = all_characters();
    let mut admissible = Vec::new();
    let mut witnesses = Vec::new();
    for (i, chi) in chars.iter().enumerate().skip(1) {
        let trivial_on: Vec<usize> = (1..=4).filter(|&k| !restricts_nontrivially(chi, &curve_lattice(k))).collect();
        if trivial_on.is_empty() {
            admissible.push(i);
        } else {
            witnesses.push((i, trivial_on));
        }
    }

    let on_curve: Vec<Vec<[u8; 4]>> = (1..=4).map(curve_two_torsion).collect();
    let mut incidence = Vec::new();
    for bits in 0u8..16 {
        let p: [u8; 4] = std::array::from_fn(|i| (bits >> (3 - i)) & 1);
        let curves: Vec<usize> = (1..=4).filter(|&k| on_curve[k - 1].contains(&p)).collect();
        incidence.push((p, curves));
    }
    let points_per_curve = std::array::from_fn(|k| on_curve[k].iter().filter(|p| **p != [0; 4]).count());
    let leftover: Vec<[u8; 4]> = incidence
        .iter()
        .filter(|(p, c)| *p != [0; 4] && c.is_empty())
        .map(|(p, _)| *p)
        .collect();

    let theta = appell_humbert::curve_form(1).add(&appell_humbert::curve_form(2));
    let base = product_lattice();
    let leftover_characters = leftover
        .iter()
        .map(|p| {
            let mu = base.combine(&p.map(BigInt::from));
            let flips = std::array::from_fn(|j| theta.im(base.vector(j), &mu).to_integer().is_odd());
            CharacterMod2 { flips }.label()
        })
        .collect();

    Classification { admissible, witnesses, incidence, points_per_curve, leftover, leftover_characters }
}

/// `Im h(ker χ, ker χ) ⊆ 2Z` for the branch form `h`.
pub fn check_2divisible(chi: &CharacterMod2) -> Result<bool, CoverError> {
    Ok(odd_witness(chi)?.is_none())
}

/// A pair of kernel basis vectors with odd `Im h`, if any.
pub fn odd_witness(chi: &CharacterMod2) -> Result<Option<(AmbientVector, AmbientVector, BigInt)>, CoverError> {
    let k = kernel_lattice(chi)?;
    let e = im_on_lattice(&branch_form(), &k);
    for i in 0..4 {
        for j in i + 1..4 {
            let x = e.entry(i, j).to_integer();
            if x.is_odd() {
                return Ok(Some((k.vector(i).clone(), k.vector(j).clone(), x)));
            }
        }
    }
    Ok(None)
}

pub fn branch_form() -> HermitianForm {
    appell_humbert::branch_bundle().form
}

/// The degree-2 isogeny `V/ker χ → A′`, which lifts to the identity of `V`.
#[derive(Clone, Debug)]
pub struct IsogenyDatum {
    pub character: CharacterMod2,
    pub kernel_lattice: LatticeBasis,
    pub analytic_rep: EisMatrix,
}

impl IsogenyDatum {
    pub fn new(chi: &CharacterMod2) -> Result<Self, CoverError> {
        Ok(IsogenyDatum { character: *chi, kernel_lattice: kernel_lattice(chi)?, analytic_rep: EisMatrix::identity() })
    }

    /// Pullback of the branch bundle of `A′`.
    pub fn branch_bundle(&self) -> LineBundleClass {
        pullback_hom(&appell_humbert::branch_bundle(), &self.analytic_rep, &self.kernel_lattice)
            .expect("kernel is a sublattice")
    }

    pub fn index(&self) -> BigInt {
        crate::lattice::index(&self.kernel_lattice, &product_lattice()).expect("kernel is a sublattice")
    }
}

/// Whether some nonzero vector of `sub` is trivial in `Λ_{A'}/ker χ`, i.e. `E` splits.
pub fn curve_splits(chi: &CharacterMod2, k: usize) -> bool {
    !restricts_nontrivially(chi, &curve_lattice(k))
}
