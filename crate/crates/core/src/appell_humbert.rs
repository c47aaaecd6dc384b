//! Line bundles on complex tori as Appell–Humbert pairs `(h, χ)`.
//!
//! A hermitian form is stored by a matrix `M` over `Q(ζ)` with
//! `h(v, w) = (1/√3)·ᵗv M w̄`, so `Im h` is half the `ζ`-coefficient of `ᵗv M w̄`.
//! Semicharacter values are exponents in `Q/Z`: `q` stands for `e^{2πiq}`.

use std::fmt;

use num::{BigInt, Signed, Zero};
use thiserror::Error;

use crate::eisenstein::{rat, ratio, EisMatrix, EisRat, Rational};
use crate::lattice::{self, AmbientVector, LatticeBasis, QMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("alternating form is not integral on the lattice")]
    NotIntegral,
    #[error("vector {0} is not in the lattice")]
    NotInLattice(String),
    #[error("bundles live on different lattices")]
    LatticeMismatch,
    #[error("map does not send {0} into the target lattice")]
    NotLatticeMap(String),
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("expected {expected} basis values, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - Rational::from_integer(q.floor().to_integer())
}

/// `λ ↦ e^{2πiq}` printed as `1, -1, i, -i` when `q ∈ ¼Z`, otherwise `e(q)`.
pub fn root_of_unity_label(q: &Rational) -> String {
    let q = frac(q);
    let quarters = &q * rat(4);
    if !quarters.is_integer() {
        return format!("e({})", q);
    }
    match quarters.to_integer().to_string().as_str() {
        "0" => "1",
        "1" => "i",
        "2" => "-1",
        _ => "-i",
    }
    .to_string()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermitianForm {
    m: EisMatrix,
}

impl fmt::Debug for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/√3)·{}", self.m)
    }
}

impl HermitianForm {
    pub fn new(m: EisMatrix) -> Result<Self, BundleError> {
        if m.is_hermitian() {
            Ok(HermitianForm { m })
        } else {
            Err(BundleError::NotHermitian)
        }
    }

    pub fn zero() -> Self {
        HermitianForm { m: EisMatrix::zero() }
    }

    pub fn matrix(&self) -> &EisMatrix {
        &self.m
    }

    /// `√3·h(v, w)` as an element of `Q(ζ)`.
    pub fn raw_value(&self, v: &AmbientVector, w: &AmbientVector) -> EisRat {
        let (v1, v2) = v.to_pair();
        let (w1, w2) = w.to_pair();
        let (w1, w2) = (w1.conj(), w2.conj());
        let m = &self.m.m;
        let r1 = &(&m[0][0] * &w1) + &(&m[0][1] * &w2);
        let r2 = &(&m[1][0] * &w1) + &(&m[1][1] * &w2);
        &(&v1 * &r1) + &(&v2 * &r2)
    }

    pub fn im(&self, v: &AmbientVector, w: &AmbientVector) -> Rational {
        self.raw_value(v, w).b() / rat(2)
    }

    pub fn add(&self, o: &HermitianForm) -> Self {
        HermitianForm { m: self.m.add(&o.m) }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        HermitianForm { m: self.m.scale(q) }
    }

    /// `F*h` for `v ↦ Fv`: matrix `ᵗF M F̄`.
    pub fn pullback(&self, f: &EisMatrix) -> Self {
        HermitianForm { m: f.transpose().mul(&self.m).mul(&f.conj()) }
    }

    /// `conj(𝔖*h)` for the antilinear `v ↦ S v̄`: matrix `ᵗS̄ M̄ S`.
    pub fn pullback_anti(&self, s: &EisMatrix) -> Self {
        HermitianForm { m: s.conj().transpose().mul(&self.m.conj()).mul(s) }
    }
}

/// Values `Im h(bᵢ, bⱼ)` on a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltFormOnLattice {
    pub lattice: LatticeBasis,
    pub matrix: QMatrix,
}

impl AltFormOnLattice {
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.iter().flatten().all(|q| q.is_integer())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        AltFormOnLattice {
            lattice: self.lattice.clone(),
            matrix: self.matrix.iter().map(|r| r.iter().map(|x| x * q).collect()).collect(),
        }
    }

    /// Oriented Pfaffian of a rank-4 form.
    ///
    /// The sign is normalized so that it does not depend on the order of the
    /// basis: the reference orientation is `(λ₁, e₁, λ₂, e₂)`, which has
    /// positive determinant in the ambient coordinates.
    pub fn pfaffian(&self) -> Rational {
        assert_eq!(self.lattice.rank(), 4, "Pfaffian needs a rank-4 lattice");
        let e = &self.matrix;
        let pf = &e[0][1] * &e[2][3] - &e[0][2] * &e[1][3] + &e[0][3] * &e[1][2];
        if self.lattice.ambient_det().is_negative() {
            -pf
        } else {
            pf
        }
    }
}

pub fn im_on_lattice(h: &HermitianForm, l: &LatticeBasis) -> AltFormOnLattice {
    let b = l.vectors();
    AltFormOnLattice {
        lattice: l.clone(),
        matrix: b.iter().map(|v| b.iter().map(|w| h.im(v, w)).collect()).collect(),
    }
}

pub fn pfaffian(e: &AltFormOnLattice) -> Rational {
    e.pfaffian()
}

/// `(h₁·h₂)` on `V/L`, by polarizing the Pfaffian.
pub fn intersection_number(h1: &HermitianForm, h2: &HermitianForm, l: &LatticeBasis) -> Result<BigInt, BundleError> {
    let e1 = im_on_lattice(h1, l);
    let e2 = im_on_lattice(h2, l);
    if !e1.is_integral() || !e2.is_integral() {
        return Err(BundleError::NotIntegral);
    }
    let pf = im_on_lattice(&h1.add(h2), l).pfaffian() - e1.pfaffian() - e2.pfaffian();
    debug_assert!(pf.is_integer());
    Ok(pf.to_integer())
}

pub fn self_intersection(h: &HermitianForm, l: &LatticeBasis) -> Result<BigInt, BundleError> {
    intersection_number(h, h, l)
}

/// A semicharacter for an integral alternating form, stored by its basis values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semicharacter {
    pub form: AltFormOnLattice,
    values: Vec<Rational>,
}

impl Semicharacter {
    pub fn new(form: AltFormOnLattice, values: Vec<Rational>) -> Result<Self, BundleError> {
        if !form.is_integral() {
            return Err(BundleError::NotIntegral);
        }
        let r = form.lattice.rank();
        if values.len() != r {
            return Err(BundleError::WrongLength { expected: r, got: values.len() });
        }
        Ok(Semicharacter { form, values: values.iter().map(frac).collect() })
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.form.lattice
    }

    /// Exponents `q_j ∈ [0, 1)` on the basis.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `χ(Σ nⱼbⱼ) = Σ nⱼqⱼ + ½ Σ_{j<k} nⱼnₖ E_{jk}` mod 1.
    pub fn eval_coords(&self, n: &[BigInt]) -> Rational {
        let mut s = rat(0);
        for (j, nj) in n.iter().enumerate() {
            let nj = Rational::from_integer(nj.clone());
            s += &nj * &self.values[j];
            for (k, nk) in n.iter().enumerate().skip(j + 1) {
                let nk = Rational::from_integer(nk.clone());
                s += &nj * &nk * self.form.entry(j, k) / rat(2);
            }
        }
        frac(&s)
    }

    pub fn eval(&self, v: &AmbientVector) -> Result<Rational, BundleError> {
        let n = self.lattice().coords(v).ok_or_else(|| BundleError::NotInLattice(v.to_string()))?;
        Ok(self.eval_coords(&n))
    }

    pub fn labels(&self) -> Vec<String> {
        self.values.iter().map(root_of_unity_label).collect()
    }

    pub fn is_sign_valued(&self) -> bool {
        self.values.iter().all(|q| q.is_zero() || *q == ratio(1, 2))
    }
}

/// `𝓛(h, χ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleClass {
    pub form: HermitianForm,
    pub character: Semicharacter,
}

impl LineBundleClass {
    pub fn new(form: HermitianForm, lattice: &LatticeBasis, values: Vec<Rational>) -> Result<Self, BundleError> {
        let alt = im_on_lattice(&form, lattice);
        Ok(LineBundleClass { form, character: Semicharacter::new(alt, values)? })
    }

    pub fn trivial(lattice: &LatticeBasis) -> Self {
        LineBundleClass::new(HermitianForm::zero(), lattice, vec![rat(0); lattice.rank()]).unwrap()
    }

    pub fn lattice(&self) -> &LatticeBasis {
        self.character.lattice()
    }

    pub fn values(&self) -> &[Rational] {
        self.character.values()
    }

    /// Equality as bundles, allowing different bases of the same lattice.
    pub fn same_class(&self, o: &LineBundleClass) -> bool {
        self.form == o.form
            && self.lattice().same_lattice(o.lattice())
            && o.lattice().vectors().iter().enumerate().all(|(j, b)| {
                self.character.eval(b).map_or(false, |q| q == o.values()[j])
            })
    }
}

pub fn semichar_eval(chi: &Semicharacter, v: &AmbientVector) -> Result<Rational, BundleError> {
    chi.eval(v)
}

pub fn tensor(l1: &LineBundleClass, l2: &LineBundleClass) -> Result<LineBundleClass, BundleError> {
    if l1.lattice() != l2.lattice() {
        return Err(BundleError::LatticeMismatch);
    }
    let values = l1.values().iter().zip(l2.values()).map(|(a, b)| a + b).collect();
    LineBundleClass::new(l1.form.add(&l2.form), l1.lattice(), values)
}

fn apply(f: &EisMatrix, v: &AmbientVector) -> AmbientVector {
    let (a, b) = f.apply(&v.to_pair());
    AmbientVector::from_pair(&a, &b)
}

/// Image of `v` under the antilinear map `v ↦ S v̄`.
pub fn apply_anti(s: &EisMatrix, v: &AmbientVector) -> AmbientVector {
    apply(s, &v.conj())
}

/// `f*𝓛` for a homomorphism with analytic representation `F`, `F(target) ⊆ L.lattice`.
pub fn pullback_hom(l: &LineBundleClass, f: &EisMatrix, target: &LatticeBasis) -> Result<LineBundleClass, BundleError> {
    let values = target
        .vectors()
        .iter()
        .map(|b| {
            let fb = apply(f, b);
            l.character.eval(&fb).map_err(|_| BundleError::NotLatticeMap(b.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    LineBundleClass::new(l.form.pullback(f), target, values)
}

/// `σ*𝓛` for an antiholomorphic map `σ(v) = S v̄`: conjugated pullback of `h` and `χ`.
pub fn pullback_antihom(l: &LineBundleClass, s: &EisMatrix, target: &LatticeBasis) -> Result<LineBundleClass, BundleError> {
    let values = target
        .vectors()
        .iter()
        .map(|b| {
            let sb = apply_anti(s, b);
            l.character.eval(&sb).map(|q| -q).map_err(|_| BundleError::NotLatticeMap(b.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    LineBundleClass::new(l.form.pullback_anti(s), target, values)
}

/// `t*_v 𝓛(h, χ) = 𝓛(h, χ·e^{2πi Im h(v, ·)})`.
pub fn translate(l: &LineBundleClass, v: &AmbientVector) -> LineBundleClass {
    let values = l
        .lattice()
        .vectors()
        .iter()
        .zip(l.values())
        .map(|(b, q)| q + l.form.im(v, b))
        .collect();
    LineBundleClass::new(l.form.clone(), l.lattice(), values).expect("translation keeps the form")
}

pub fn is_symmetric(l: &LineBundleClass) -> bool {
    l.character.is_sign_valued()
}

/// Semicharacter of a symmetric divisor at half-lattice points:
/// `χ(λ) = (−1)^{m(D,0) + m(D,λ/2)}`.
pub fn symmetric_semichar_from_multiplicities<K: Clone>(m_origin: u32, points: &[(K, u32)]) -> Vec<(K, i8)> {
    points
        .iter()
        .map(|(k, m)| (k.clone(), if (m_origin + m) % 2 == 0 { 1 } else { -1 }))
        .collect()
}

/// The fifteen nontrivial `±1` patterns on a 4-element basis, in the fixed labelling order.
pub const SIGN_PATTERNS: [[i8; 4]; 15] = [
    [-1, -1, 1, -1],
    [1, -1, -1, 1],
    [-1, 1, -1, -1],
    [1, 1, -1, 1],
    [-1, 1, 1, 1],
    [-1, 1, -1, 1],
    [1, 1, 1, -1],
    [1, -1, 1, -1],
    [-1, 1, 1, -1],
    [1, 1, -1, -1],
    [-1, -1, -1, 1],
    [1, -1, 1, 1],
    [1, -1, -1, -1],
    [-1, -1, 1, 1],
    [-1, -1, -1, -1],
];

pub fn sign_to_exponent(s: i8) -> Rational {
    if s < 0 {
        ratio(1, 2)
    } else {
        rat(0)
    }
}

/// All `𝓜` with `𝓜² = 𝓛` and form `h/2`, or empty when `Im h/2` is not integral.
///
/// The first root has every exponent in `[0, 1/2)`; root `k+1` is the first
/// root times the k-th entry of [`SIGN_PATTERNS`], read on the lattice basis.
/// Requires a rank-4 lattice.
pub fn square_roots(l: &LineBundleClass) -> Vec<LineBundleClass> {
    let half = l.form.scale(&ratio(1, 2));
    if !im_on_lattice(&half, l.lattice()).is_integral() {
        return Vec::new();
    }
    let psi1: Vec<Rational> = l.values().iter().map(|q| q / rat(2)).collect();
    let mut out = vec![LineBundleClass::new(half.clone(), l.lattice(), psi1.clone()).unwrap()];
    for pattern in SIGN_PATTERNS {
        let vals = psi1.iter().zip(pattern).map(|(q, s)| q + sign_to_exponent(s)).collect();
        out.push(LineBundleClass::new(half.clone(), l.lattice(), vals).unwrap());
    }
    out
}

// ---------------------------------------------------------------------------
// Bundles on the equianharmonic product `A′ = E′ × E′` and its double cover.

/// Linear forms `F₁ = z₂, F₂ = z₁, F₃ = z₁ − z₂, F₄ = ζz₁ − z₂`, padded to 2×2.
pub fn curve_projection(k: usize) -> EisMatrix {
    let row = match k {
        1 => [(0, 0), (1, 0)],
        2 => [(1, 0), (0, 0)],
        3 => [(1, 0), (-1, 0)],
        4 => [(0, 1), (-1, 0)],
        _ => panic!("curve index {k} out of range"),
    };
    EisMatrix::from_ints([row, [(0, 0), (0, 0)]])
}

/// `pr₁*𝒪_{E′}(0)` on the product lattice: form `(2/√3) z₁w̄₁`, and the
/// semicharacter `ν(a + bζ) = (−1)^{a+b+ab}` on the first factor.
///
/// Pulling this back along [`curve_projection`] gives `F_k*𝒪_{E′}(0)`.
pub fn elliptic_origin_bundle() -> LineBundleClass {
    let form = HermitianForm::new(EisMatrix::from_ints([[(2, 0), (0, 0)], [(0, 0), (0, 0)]])).unwrap();
    let half = ratio(1, 2);
    LineBundleClass::new(form, &lattice::product_lattice(), vec![half.clone(), rat(0), half, rat(0)]).unwrap()
}

/// `𝒪_{A′}(E_k′)`.
pub fn curve_bundle(k: usize) -> LineBundleClass {
    pullback_hom(&elliptic_origin_bundle(), &curve_projection(k), &lattice::product_lattice())
        .expect("coordinate projections preserve the product lattice")
}

pub fn curve_form(k: usize) -> HermitianForm {
    curve_bundle(k).form
}

/// `𝒪_{A′}(E₁′ + E₂′ + E₃′ + E₄′)`.
pub fn branch_bundle() -> LineBundleClass {
    (2..=4).fold(curve_bundle(1), |acc, k| tensor(&acc, &curve_bundle(k)).unwrap())
}

/// The branch bundle pulled back to the index-2 sublattice `Λ_A`.
pub fn cover_branch_bundle() -> LineBundleClass {
    pullback_hom(&branch_bundle(), &EisMatrix::identity(), &lattice::cover_lattice()).unwrap()
}

/// The sixteen square roots of the cover branch bundle, in label order.
pub fn cover_square_roots() -> Vec<LineBundleClass> {
    square_roots(&cover_branch_bundle())
}
