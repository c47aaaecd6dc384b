//! Affine symmetries of `A = V/Λ_A` preserving the branch divisor `E₁ + E₂ + E₃ + E₄`.
//!
//! An [`AffineSymmetry`] is `v ↦ L v + t`, or `v ↦ L v̄ + t` when antiholomorphic.

use std::fmt;

use num::{BigInt, One, Signed};
use thiserror::Error;

use crate::appell_humbert::{pullback_antihom, pullback_hom, translate, LineBundleClass};
use crate::eisenstein::{EisInt, EisMatrix, EisRat};
use crate::lattice::{
    cover_lattice, det_z, line_membership_rank2, product_lattice, tangent_line, AmbientVector, ComplexLine,
    LatticeBasis, ZMatrix,
};
use crate::permgroup::Permutation;
use crate::torsion_covers::{all_characters, CharacterMod2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("map does not preserve the lattice")]
    NotLatticePreserving,
    #[error("map does not preserve the branch divisor")]
    NotDivisorPreserving,
    #[error("pullback of root {0} is not among the listed roots")]
    RootNotFound(usize),
    #[error("points of the quadruple are not pairwise distinct")]
    DegenerateQuadruple,
}

#[derive(Clone, PartialEq, Eq)]
pub struct AffineSymmetry {
    pub linear: EisMatrix,
    pub antiholomorphic: bool,
    pub translation: AmbientVector,
}

impl fmt::Debug for AffineSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.antiholomorphic { "·conj" } else { "" };
        write!(f, "v ↦ {}{}(v) + {}", self.linear, bar, self.translation)
    }
}

impl AffineSymmetry {
    pub fn linear(m: EisMatrix) -> Self {
        AffineSymmetry { linear: m, antiholomorphic: false, translation: AmbientVector::zero() }
    }

    pub fn antilinear(m: EisMatrix) -> Self {
        AffineSymmetry { linear: m, antiholomorphic: true, translation: AmbientVector::zero() }
    }

    pub fn translation(t: AmbientVector) -> Self {
        AffineSymmetry { linear: EisMatrix::identity(), antiholomorphic: false, translation: t }
    }

    pub fn identity() -> Self {
        AffineSymmetry::linear(EisMatrix::identity())
    }

    /// The (anti)linear part applied to `v`.
    pub fn apply_linear(&self, v: &AmbientVector) -> AmbientVector {
        let w = if self.antiholomorphic { v.conj() } else { v.clone() };
        let (a, b) = self.linear.apply(&w.to_pair());
        AmbientVector::from_pair(&a, &b)
    }

    pub fn apply(&self, v: &AmbientVector) -> AmbientVector {
        self.apply_linear(v).add(&self.translation)
    }

    /// `self ∘ o`: apply `o` first.
    pub fn compose(&self, o: &AffineSymmetry) -> AffineSymmetry {
        let inner = if self.antiholomorphic { o.linear.conj() } else { o.linear.clone() };
        AffineSymmetry {
            linear: self.linear.mul(&inner),
            antiholomorphic: self.antiholomorphic ^ o.antiholomorphic,
            translation: self.apply(&o.translation),
        }
    }

    pub fn inverse(&self) -> AffineSymmetry {
        let base = if self.antiholomorphic { self.linear.conj() } else { self.linear.clone() };
        let inv = base.inverse().expect("symmetry is invertible");
        let t = if self.antiholomorphic { self.translation.conj() } else { self.translation.clone() };
        let (a, b) = inv.apply(&t.to_pair());
        AffineSymmetry {
            linear: inv,
            antiholomorphic: self.antiholomorphic,
            translation: AmbientVector::from_pair(&a, &b).neg(),
        }
    }

    pub fn pow(&self, e: u32) -> AffineSymmetry {
        (0..e).fold(AffineSymmetry::identity(), |acc, _| acc.compose(self))
    }

    pub fn neg_linear(&self) -> AffineSymmetry {
        AffineSymmetry { linear: self.linear.neg(), ..self.clone() }
    }

    /// Equality as maps on `V/L`.
    pub fn same_map(&self, o: &AffineSymmetry, l: &LatticeBasis) -> bool {
        self.linear == o.linear
            && self.antiholomorphic == o.antiholomorphic
            && l.contains(&self.translation.sub(&o.translation))
    }

    /// `g*𝓛`, with `g = t ∘ (linear part)`.
    pub fn pull_back(&self, l: &LineBundleClass) -> Result<LineBundleClass, SymmetryError> {
        let shifted = translate(l, &self.translation);
        let out = if self.antiholomorphic {
            pullback_antihom(&shifted, &self.linear, l.lattice())
        } else {
            pullback_hom(&shifted, &self.linear, l.lattice())
        };
        out.map_err(|_| SymmetryError::NotLatticePreserving)
    }
}

#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    pub x: EisRat,
    pub y: EisRat,
}

impl ProjectivePoint {
    pub fn new(x: EisRat, y: EisRat) -> Self {
        assert!(!(x.is_zero() && y.is_zero()), "projective point must be nonzero");
        ProjectivePoint { x, y }
    }

    pub fn from_ints(x: (i64, i64), y: (i64, i64)) -> Self {
        ProjectivePoint::new(EisRat::from_ints(x.0, x.1), EisRat::from_ints(y.0, y.1))
    }

    pub fn infinity() -> Self {
        ProjectivePoint::new(EisRat::one(), EisRat::zero())
    }

    pub fn affine(x: EisRat) -> Self {
        ProjectivePoint::new(x, EisRat::one())
    }

    pub fn map(&self, m: &EisMatrix) -> Self {
        let (x, y) = m.apply(&(self.x.clone(), self.y.clone()));
        ProjectivePoint::new(x, y)
    }

    fn det(&self, o: &ProjectivePoint) -> EisRat {
        &self.x * &o.y - &o.x * &self.y
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, o: &Self) -> bool {
        self.det(o).is_zero()
    }
}

/// `((p₁−p₃)(p₂−p₄)) / ((p₂−p₃)(p₁−p₄))`, in homogeneous form.
pub fn cross_ratio(p: [&ProjectivePoint; 4]) -> Result<EisRat, SymmetryError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return Err(SymmetryError::DegenerateQuadruple);
            }
        }
    }
    let num = &p[0].det(p[2]) * &p[1].det(p[3]);
    let den = &p[1].det(p[2]) * &p[0].det(p[3]);
    Ok(&num * &den.inverse().expect("distinct points"))
}

// ---------------------------------------------------------------------------
// The named maps.

pub fn g2() -> AffineSymmetry {
    AffineSymmetry::linear(EisMatrix::from_ints([[(0, 1), (-1, 0)], [(0, 1), (0, -1)]]))
}

pub fn g3() -> AffineSymmetry {
    AffineSymmetry::linear(EisMatrix::from_ints([[(0, 0), (-1, 1)], [(1, -1), (-1, 1)]]))
}

pub fn minus_identity() -> AffineSymmetry {
    AffineSymmetry::linear(EisMatrix::identity().neg())
}

/// Translation by the base point `a = ζe₁ + Λ_A`.
pub fn tau() -> AffineSymmetry {
    AffineSymmetry::translation(crate::lattice::lambda1())
}

/// `(z₁, z₂) ↦ ((ζ−1)z̄₂, (ζ−1)z̄₁)`.
pub fn sigma() -> AffineSymmetry {
    AffineSymmetry::antilinear(EisMatrix::from_ints([[(0, 0), (-1, 1)], [(-1, 1), (0, 0)]]))
}

/// `N = (1 ζ; 0 1)`, from the `(𝐞₁, 𝐞₂)` coordinates to `(e₁, e₂)`.
pub fn n_matrix() -> EisMatrix {
    EisMatrix::from_ints([[(1, 0), (0, 1)], [(0, 0), (1, 0)]])
}

pub fn g2_tilde() -> EisMatrix {
    EisMatrix::from_ints([[(1, 0), (-2, 2)], [(0, 1), (-1, 0)]])
}

pub fn g3_tilde() -> EisMatrix {
    EisMatrix::from_ints([[(-1, 0), (0, 0)], [(1, -1), (0, 1)]])
}

/// `N g̃ N⁻¹`.
pub fn from_tilde(t: &EisMatrix) -> EisMatrix {
    let n = n_matrix();
    n.mul(t).mul(&n.inverse().unwrap())
}

/// The order-3 automorphism of `A′` with `γ(e₁) = −λ₁`, `γ(e₂) = e₁ + e₂`.
pub fn gamma() -> AffineSymmetry {
    AffineSymmetry::linear(EisMatrix::from_ints([[(0, -1), (1, 0)], [(0, 0), (1, 0)]]))
}

/// `P₁ … P₄`: the tangent directions in the `(𝐞₁, 𝐞₂)` coordinates.
pub fn tangent_points() -> [ProjectivePoint; 4] {
    [
        ProjectivePoint::from_ints((1, 0), (0, 0)),
        ProjectivePoint::from_ints((0, -1), (1, 0)),
        ProjectivePoint::from_ints((1, -1), (1, 0)),
        ProjectivePoint::from_ints((1, -2), (1, 0)),
    ]
}

// ---------------------------------------------------------------------------

/// Integer matrix of the (anti)linear part in the basis of `l` (columns are images).
pub fn rational_rep(g: &AffineSymmetry, l: &LatticeBasis) -> Result<ZMatrix, SymmetryError> {
    let images = LatticeBasis::new(l.vectors().iter().map(|b| g.apply_linear(b)).collect())
        .map_err(|_| SymmetryError::NotLatticePreserving)?;
    let m = l.coords_matrix(&images).map_err(|_| SymmetryError::NotLatticePreserving)?;
    if det_z(&m).abs().is_one() {
        Ok(m)
    } else {
        Err(SymmetryError::NotLatticePreserving)
    }
}

fn line_image(g: &AffineSymmetry, line: &ComplexLine) -> ComplexLine {
    let (d1, d2) = &line.direction;
    let (d1, d2) = if g.antiholomorphic { (d1.conj(), d2.conj()) } else { (d1.clone(), d2.clone()) };
    let (a, b) = g.linear.apply(&(d1, d2));
    ComplexLine::new(a, b)
}

/// Permutation of the tangent lines `V₁ … V₄` induced by the (anti)linear part, if any.
fn line_permutation(g: &AffineSymmetry) -> Option<Permutation> {
    let lines: Vec<ComplexLine> = (1..=4).map(tangent_line).collect();
    let images = lines
        .iter()
        .map(|v| {
            let w = line_image(g, v);
            lines.iter().position(|u| *u == w)
        })
        .collect::<Option<Vec<_>>>()?;
    Permutation::from_images(images)
}

/// Whether `t` is `o` or `a` modulo `Λ_A`.
fn in_base_locus(t: &AmbientVector) -> bool {
    let l = cover_lattice();
    l.contains(t) || l.contains(&t.sub(&crate::lattice::lambda1()))
}

pub fn preserves_divisor(g: &AffineSymmetry) -> Result<bool, SymmetryError> {
    rational_rep(g, &cover_lattice())?;
    Ok(line_permutation(g).is_some() && in_base_locus(&g.translation))
}

pub fn tangent_line_permutation(g: &AffineSymmetry) -> Result<Permutation, SymmetryError> {
    if !preserves_divisor(g)? {
        return Err(SymmetryError::NotDivisorPreserving);
    }
    Ok(line_permutation(g).expect("checked above"))
}

/// 2-torsion points `μ/2` of `A` (μ given mod 2 on `𝐞₁ … 𝐞₄`) lying on all four curves.
///
/// `μ/2 ∈ V_k + Λ_A` iff `μ ∈ (V_k ∩ Λ_A) + 2Λ_A`.
pub fn base_locus_two_torsion() -> Vec<[u8; 4]> {
    let la = cover_lattice();
    let two = la.scaled(2);
    let on_curve = |mu: &AmbientVector, k: usize| {
        let m = line_membership_rank2(&tangent_line(k), &la);
        [[0i64, 0], [1, 0], [0, 1], [1, 1]]
            .iter()
            .any(|c| two.contains(&mu.sub(&m.combine(&[BigInt::from(c[0]), BigInt::from(c[1])]))))
    };
    (0u8..16)
        .map(|bits| std::array::from_fn(|i| (bits >> (3 - i)) & 1))
        .filter(|p: &[u8; 4]| {
            let mu = la.combine(&p.map(BigInt::from));
            (1..=4).all(|k| on_curve(&mu, k))
        })
        .collect()
}

/// A solution of the generator search.
#[derive(Clone, Debug)]
pub struct GeneratorHit {
    /// Matrix in the `(𝐞₁, 𝐞₂)` coordinates.
    pub tilde: EisMatrix,
    /// Induced permutation of `P₁ … P₄`.
    pub permutation: Permutation,
    /// `N g̃ N⁻¹`.
    pub symmetry: AffineSymmetry,
}

fn eis_grid(bound: i64, a_step: i64, b_step: i64) -> Vec<EisInt> {
    let range = |step: i64| (-bound..=bound).filter(move |x| x % step == 0);
    range(a_step).flat_map(|a| range(b_step).map(move |b| EisInt::new(a, b))).collect()
}

/// Matrices `(a₁₁ a₁₂; a₂₁ a₂₂)` with `a₁₁ ∈ Γ_{2ζ}`, `a₁₂ ∈ 2Γ_ζ`, `a₂₁, a₂₂ ∈ Γ_ζ`,
/// unit determinant and coefficients bounded by `bound`, inducing `(P₁ P₃)(P₂ P₄)` or `(P₁ P₂ P₃)`.
///
/// Results are sorted by their integer coefficients.
pub fn search_generators(bound: i64) -> Vec<GeneratorHit> {
    let pts: Vec<(EisInt, EisInt)> = tangent_points()
        .iter()
        .map(|p| (p.x.to_int().unwrap(), p.y.to_int().unwrap()))
        .collect();
    let targets = [[2usize, 3, 0, 1], [1, 2, 0, 3]];
    let a11s = eis_grid(bound, 1, 2);
    let a12s = eis_grid(bound, 2, 2);
    let full = eis_grid(bound, 1, 1);

    let mut raw: Vec<[EisInt; 4]> = Vec::new();
    for &a in &a11s {
        for &b in &a12s {
            for &c in &full {
                for &d in &full {
                    if a.mul(d).sub(b.mul(c)).norm() != 1 {
                        continue;
                    }
                    let img: Vec<(EisInt, EisInt)> =
                        pts.iter().map(|&(x, y)| (a.mul(x).add(b.mul(y)), c.mul(x).add(d.mul(y)))).collect();
                    let matches = |t: &[usize; 4]| {
                        (0..4).all(|i| {
                            let (x, y) = img[i];
                            let (px, py) = pts[t[i]];
                            x.mul(py).sub(y.mul(px)).is_zero()
                        })
                    };
                    if targets.iter().any(matches) {
                        raw.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    raw.sort();
    let la = cover_lattice();
    raw.into_iter()
        .filter_map(|[a, b, c, d]| {
            let tilde = EisMatrix::new(a.to_rat(), b.to_rat(), c.to_rat(), d.to_rat());
            let symmetry = AffineSymmetry::linear(from_tilde(&tilde));
            rational_rep(&symmetry, &la).ok()?;
            let permutation = Permutation::from_images(
                tangent_points().iter().map(|p| {
                    let q = p.map(&tilde);
                    tangent_points().iter().position(|r| *r == q).unwrap()
                }).collect(),
            )?;
            Some(GeneratorHit { tilde, permutation, symmetry })
        })
        .collect()
}

/// `g₂² = g₃³ = (g₂g₃)³ = −I₂`, `(−I₂)² = 1` on `A`, and `τσ = στ`.
pub fn verify_presentation(g2: &AffineSymmetry, g3: &AffineSymmetry) -> bool {
    let la = cover_lattice();
    let h = minus_identity();
    let rels = [g2.pow(2), g3.pow(3), g2.compose(g3).pow(3)];
    rels.iter().all(|r| r.same_map(&h, &la))
        && h.pow(2).same_map(&AffineSymmetry::identity(), &la)
        && tau().compose(&sigma()).same_map(&sigma().compose(&tau()), &la)
}

/// `ϱ(g)`: sends `k` to the index of `g*𝓛_k`.
pub fn action_on_square_roots(g: &AffineSymmetry, roots: &[LineBundleClass]) -> Result<Permutation, SymmetryError> {
    if !preserves_divisor(g)? {
        return Err(SymmetryError::NotDivisorPreserving);
    }
    let images = roots
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let p = g.pull_back(r)?;
            roots.iter().position(|s| s.same_class(&p)).ok_or(SymmetryError::RootNotFound(k + 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::from_images(images).ok_or(SymmetryError::RootNotFound(0))
}

/// `χ ↦ χ∘γ` on the characters, by label.
pub fn character_pullback(g: &AffineSymmetry, chi: &CharacterMod2) -> CharacterMod2 {
    let p = product_lattice();
    let flips = std::array::from_fn(|j| chi.eval(&g.apply_linear(p.vector(j))).expect("lattice map") < 0);
    CharacterMod2 { flips }
}

/// Result of the γ computation on `A′`.
#[derive(Clone, Debug)]
pub struct GammaAction {
    pub order: u32,
    pub preserves_lattice: bool,
    pub line_permutation: Option<Permutation>,
    /// Permutation of `{χ₁, χ₂, χ₃}` (as 1, 2, 3).
    pub on_sigma: Permutation,
}

pub fn gamma_action_on_sigma() -> GammaAction {
    let g = gamma();
    let p = product_lattice();
    let order = (1..=12).find(|&k| g.pow(k) == AffineSymmetry::identity()).unwrap_or(0);
    let preserves_lattice = rational_rep(&g, &p).is_ok();
    let chars = all_characters();
    let images = (1..=3)
        .map(|i| character_pullback(&g, &chars[i]).label() - 1)
        .collect();
    GammaAction {
        order,
        preserves_lattice,
        line_permutation: line_permutation(&g),
        on_sigma: Permutation::from_images(images).expect("γ permutes χ₁, χ₂, χ₃"),
    }
}
