//! Lattices in the real 4-space underlying `V = C²`.
//!
//! Every vector is stored against the fixed reference basis `(e₁, ζe₁, e₂, ζe₂)`,
//! so `(x₀, x₁, x₂, x₃)` is the point `(x₀ + x₁ζ, x₂ + x₃ζ)`.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::eisenstein::{rat, EisRat, Rational};

pub type QMatrix = Vec<Vec<Rational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("basis vectors are linearly dependent over Q")]
    LinearlyDependent,
    #[error("lattice is not commensurable with the reference lattice")]
    NotCommensurable,
    #[error("vector {0} is not contained in the lattice")]
    NotContained(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientVector(pub [Rational; 4]);

impl fmt::Debug for AmbientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AmbientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (z1, z2) = self.to_pair();
        write!(f, "({}, {})", z1, z2)
    }
}

impl AmbientVector {
    pub fn from_ints(c: [i64; 4]) -> Self {
        AmbientVector(c.map(rat))
    }

    pub fn zero() -> Self {
        AmbientVector::from_ints([0; 4])
    }

    pub fn from_pair(z1: &EisRat, z2: &EisRat) -> Self {
        AmbientVector([z1.a().clone(), z1.b().clone(), z2.a().clone(), z2.b().clone()])
    }

    pub fn to_pair(&self) -> (EisRat, EisRat) {
        let [x0, x1, x2, x3] = self.0.clone();
        (EisRat::new(x0, x1), EisRat::new(x2, x3))
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &AmbientVector) -> Self {
        AmbientVector(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &AmbientVector) -> Self {
        AmbientVector(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn neg(&self) -> Self {
        AmbientVector(std::array::from_fn(|i| -&self.0[i]))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        AmbientVector(std::array::from_fn(|i| &self.0[i] * q))
    }

    /// Complex-scalar multiplication `s·v`.
    pub fn mul_scalar(&self, s: &EisRat) -> Self {
        let (z1, z2) = self.to_pair();
        AmbientVector::from_pair(&(s * &z1), &(s * &z2))
    }

    pub fn conj(&self) -> Self {
        let (z1, z2) = self.to_pair();
        AmbientVector::from_pair(&z1.conj(), &z2.conj())
    }
}

/// Shorthands for the standard vectors: `e₁, ζe₁, e₂, ζe₂`.
pub fn e1() -> AmbientVector {
    AmbientVector::from_ints([1, 0, 0, 0])
}
pub fn zeta_e1() -> AmbientVector {
    AmbientVector::from_ints([0, 1, 0, 0])
}
pub fn e2() -> AmbientVector {
    AmbientVector::from_ints([0, 0, 1, 0])
}
pub fn zeta_e2() -> AmbientVector {
    AmbientVector::from_ints([0, 0, 0, 1])
}

/// Matrix of multiplication by `ζ` in ambient coordinates (acting on columns).
pub fn zeta_action_matrix() -> QMatrix {
    let block = [[0i64, -1], [1, 1]];
    let mut m = vec![vec![rat(0); 4]; 4];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                m[2 * k + i][2 * k + j] = rat(block[i][j]);
            }
        }
    }
    m
}

/// An ordered basis of a lattice of rank ≤ 4.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    vectors: Vec<AmbientVector>,
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vectors.iter()).finish()
    }
}

impl LatticeBasis {
    pub fn new(vectors: Vec<AmbientVector>) -> Result<Self, LatticeError> {
        let rows: QMatrix = vectors.iter().map(|v| v.0.to_vec()).collect();
        if vectors.len() > 4 || rank(&rows) != vectors.len() {
            return Err(LatticeError::LinearlyDependent);
        }
        Ok(LatticeBasis { vectors })
    }

    pub fn from_ints(vs: &[[i64; 4]]) -> Result<Self, LatticeError> {
        LatticeBasis::new(vs.iter().map(|&c| AmbientVector::from_ints(c)).collect())
    }

    /// The lattice `Z e₁ ⊕ Z ζe₁ ⊕ Z e₂ ⊕ Z ζe₂ = Γ_ζ²`.
    pub fn standard() -> Self {
        LatticeBasis { vectors: vec![e1(), zeta_e1(), e2(), zeta_e2()] }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[AmbientVector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &AmbientVector {
        &self.vectors[i]
    }

    pub fn scaled(&self, k: i64) -> Self {
        LatticeBasis::new(self.vectors.iter().map(|v| v.scale(&rat(k))).collect())
            .expect("nonzero scaling keeps independence")
    }

    /// Combination `Σ n_j b_j`.
    pub fn combine(&self, n: &[BigInt]) -> AmbientVector {
        self.vectors
            .iter()
            .zip(n)
            .fold(AmbientVector::zero(), |acc, (b, k)| acc.add(&b.scale(&Rational::from_integer(k.clone()))))
    }

    /// Rational coordinates of `v` in this basis, or `None` if `v` is outside the Q-span.
    pub fn rational_coords(&self, v: &AmbientVector) -> Option<Vec<Rational>> {
        // Solve Σ c_j b_j = v: a 4×r system, columns = basis vectors.
        let r = self.rank();
        let mut aug: QMatrix = (0..4)
            .map(|i| {
                let mut row: Vec<Rational> = self.vectors.iter().map(|b| b.0[i].clone()).collect();
                row.push(v.0[i].clone());
                row
            })
            .collect();
        let pivots = row_reduce(&mut aug, r);
        // Inconsistent rows: zero on the left, nonzero on the right.
        for row in aug.iter().skip(pivots.len()) {
            if !row[r].is_zero() {
                return None;
            }
        }
        let mut c = vec![rat(0); r];
        for (row, &col) in pivots.iter().enumerate() {
            c[col] = aug[row][r].clone();
        }
        Some(c)
    }

    /// Integer coordinates of `v`, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &AmbientVector) -> Option<Vec<BigInt>> {
        let c = self.rational_coords(v)?;
        c.iter().all(|q| q.is_integer()).then(|| c.iter().map(|q| q.to_integer()).collect())
    }

    pub fn contains(&self, v: &AmbientVector) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    /// Integer coordinate matrix of `sub`'s basis vectors (as columns) in this basis.
    pub fn coords_matrix(&self, sub: &LatticeBasis) -> Result<ZMatrix, LatticeError> {
        let cols = sub
            .vectors
            .iter()
            .map(|v| self.coords(v).ok_or_else(|| LatticeError::NotContained(v.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(transpose(&cols))
    }

    /// Signed determinant of a rank-4 basis against the ambient reference basis.
    pub fn ambient_det(&self) -> Rational {
        let m: QMatrix = (0..4).map(|i| self.vectors.iter().map(|b| b.0[i].clone()).collect()).collect();
        det_q(&m)
    }

    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }
}

/// A complex line `C·d` in `V`.
#[derive(Clone, Debug)]
pub struct ComplexLine {
    pub direction: (EisRat, EisRat),
}

impl ComplexLine {
    pub fn new(d1: EisRat, d2: EisRat) -> Self {
        assert!(!(d1.is_zero() && d2.is_zero()), "line direction must be nonzero");
        ComplexLine { direction: (d1, d2) }
    }

    pub fn contains(&self, v: &(EisRat, EisRat)) -> bool {
        (&v.0 * &self.direction.1 - &v.1 * &self.direction.0).is_zero()
    }

    /// Projective equality.
    pub fn same_as(&self, other: &ComplexLine) -> bool {
        self.contains(&other.direction)
    }
}

impl PartialEq for ComplexLine {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// The column-style Hermite normal form of `basis` in coordinates of `reference`.
///
/// Lower echelon, positive pivots, entries left of a pivot reduced into `[0, pivot)`.
/// Two bases generate the same lattice iff their normal forms agree.
pub fn hnf(basis: &LatticeBasis, reference: &LatticeBasis) -> Result<QMatrix, LatticeError> {
    let cols = basis
        .vectors
        .iter()
        .map(|v| reference.rational_coords(v).ok_or(LatticeError::NotCommensurable))
        .collect::<Result<Vec<_>, _>>()?;
    let m = transpose(&cols);
    let denom = cols
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let int: ZMatrix = m
        .iter()
        .map(|row| row.iter().map(|q| (q * Rational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let (h, _) = column_hnf(&int);
    let r = basis.rank();
    Ok(h.iter()
        .map(|row| row.iter().take(r).map(|x| Rational::new(x.clone(), denom.clone())).collect())
        .collect())
}

/// `[super : sub]` for lattices of equal rank with `sub ⊆ super`.
pub fn index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<BigInt, LatticeError> {
    if sub.rank() != sup.rank() {
        return Err(LatticeError::RankMismatch(sub.rank(), sup.rank()));
    }
    let c = sup.coords_matrix(sub)?;
    Ok(det_z(&c).abs())
}

/// Index of `sub` in its saturation `(sub ⊗ Q) ∩ sup`: gcd of maximal minors.
pub fn saturation_index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<BigInt, LatticeError> {
    let c = sup.coords_matrix(sub)?;
    let r = sub.rank();
    let n = sup.rank();
    let mut g = BigInt::zero();
    for rows in combinations(n, r) {
        let minor: ZMatrix = rows.iter().map(|&i| c[i].clone()).collect();
        g = g.gcd(&det_z(&minor));
    }
    Ok(g)
}

/// True iff the change of basis between `from` and `to` lies in `GL(n, Z)`.
pub fn base_change_is_unimodular(from: &LatticeBasis, to: &LatticeBasis) -> bool {
    match (from.coords_matrix(to), to.coords_matrix(from)) {
        (Ok(c), Ok(_)) => from.rank() == to.rank() && det_z(&c).abs().is_one(),
        _ => false,
    }
}

/// `line ∩ ambient` as a saturated sublattice, computed through an integer kernel.
pub fn line_membership_rank2(line: &ComplexLine, ambient: &LatticeBasis) -> LatticeBasis {
    // Σ n_j b_j lies on the line iff z₁d₂ − z₂d₁ = 0, two rational equations.
    let (d1, d2) = &line.direction;
    let r = ambient.rank();
    let eqs: Vec<EisRat> = ambient
        .vectors
        .iter()
        .map(|b| {
            let (z1, z2) = b.to_pair();
            &z1 * d2 - &z2 * d1
        })
        .collect();
    let rows_q: QMatrix = vec![
        eqs.iter().map(|w| w.a().clone()).collect(),
        eqs.iter().map(|w| w.b().clone()).collect(),
    ];
    let denom = rows_q.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let rows: ZMatrix = rows_q
        .iter()
        .map(|row| row.iter().map(|q| (q * Rational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let kernel = integer_kernel(&rows, r);
    LatticeBasis::new(kernel.iter().map(|k| ambient.combine(k)).collect())
        .expect("kernel basis is independent")
}

// ---------------------------------------------------------------------------
// The equianharmonic product and its sublattices.

/// `λ₁ = ζe₁`, `λ₂ = ζe₂`.
pub fn lambda1() -> AmbientVector {
    zeta_e1()
}
pub fn lambda2() -> AmbientVector {
    zeta_e2()
}

/// `Γ_ζ ⊕ Γ_ζ` in the order `(λ₁, λ₂, e₁, e₂)`.
pub fn product_lattice() -> LatticeBasis {
    LatticeBasis::new(vec![lambda1(), lambda2(), e1(), e2()]).unwrap()
}

/// Index-2 sublattice with basis `𝐞₁ = e₁, 𝐞₂ = λ₁+e₂, 𝐞₃ = λ₂+e₂, 𝐞₄ = 2e₂`.
pub fn cover_lattice() -> LatticeBasis {
    LatticeBasis::new(vec![e1(), lambda1().add(&e2()), lambda2().add(&e2()), e2().scale(&rat(2))]).unwrap()
}

/// Tangent line of the k-th curve, `k ∈ 1..=4`: directions `(1,0), (0,1), (1,1), (1,ζ)`.
pub fn tangent_line(k: usize) -> ComplexLine {
    let (d1, d2) = match k {
        1 => (EisRat::one(), EisRat::zero()),
        2 => (EisRat::zero(), EisRat::one()),
        3 => (EisRat::one(), EisRat::one()),
        4 => (EisRat::one(), EisRat::zeta()),
        _ => panic!("curve index {k} out of range"),
    };
    ComplexLine::new(d1, d2)
}

/// Rank-2 lattice of the k-th curve in the product lattice, with the printed generators.
pub fn curve_lattice(k: usize) -> LatticeBasis {
    let v = match k {
        1 => vec![lambda1(), e1()],
        2 => vec![lambda2(), e2()],
        3 => vec![lambda1().add(&lambda2()), e1().add(&e2())],
        4 => vec![lambda1().add(&lambda2()).sub(&e2()), lambda2().add(&e1())],
        _ => panic!("curve index {k} out of range"),
    };
    LatticeBasis::new(v).unwrap()
}

// ---------------------------------------------------------------------------
// Small exact linear algebra.

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Gauss-Jordan on the first `ncols` columns; returns pivot columns in row order.
fn row_reduce(m: &mut QMatrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..m[i].len() {
                    let d = &f * &m[row][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let mut c = m.clone();
    let n = c[0].len();
    row_reduce(&mut c, n).len()
}

pub fn det_q(m: &QMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = rat(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return rat(0);
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det = &det * &a[col][col];
        for i in col + 1..n {
            let f = &a[i][col] / &a[col][col];
            for j in col..n {
                let d = &f * &a[col][j];
                a[i][j] = &a[i][j] - &d;
            }
        }
    }
    det
}

pub fn det_z(m: &ZMatrix) -> BigInt {
    let q: QMatrix = m.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    det_q(&q).to_integer()
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn col_axpy(m: &mut ZMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let d = q * &row[src];
        row[dst] -= d;
    }
}

fn col_swap(m: &mut ZMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_negate(m: &mut ZMatrix, a: usize) {
    for row in m.iter_mut() {
        row[a] = -&row[a];
    }
}

/// Column-style HNF: returns `(H, U)` with `H = A·U`, `U ∈ GL(n, Z)`.
///
/// Nonzero columns of `H` come first and form a lower echelon matrix with
/// positive pivots; each entry left of a pivot lies in `[0, pivot)`.
pub fn column_hnf(a: &ZMatrix) -> (ZMatrix, ZMatrix) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut h = a.clone();
    let mut u: ZMatrix = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let mut k = 0;
    for i in 0..m {
        if k == n {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (k..n).filter(|&j| !h[i][j].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&j| h[i][j].abs()).unwrap();
            col_swap(&mut h, k, p);
            col_swap(&mut u, k, p);
            if nonzero.len() == 1 {
                break;
            }
            for j in k + 1..n {
                if !h[i][j].is_zero() {
                    let q = h[i][j].div_floor(&h[i][k]);
                    col_axpy(&mut h, j, k, &q);
                    col_axpy(&mut u, j, k, &q);
                }
            }
        }
        if h[i].get(k).map_or(true, Zero::is_zero) {
            continue;
        }
        if h[i][k].is_negative() {
            col_negate(&mut h, k);
            col_negate(&mut u, k);
        }
        for j in 0..k {
            let q = h[i][j].div_floor(&h[i][k]);
            if !q.is_zero() {
                col_axpy(&mut h, j, k, &q);
                col_axpy(&mut u, j, k, &q);
            }
        }
        k += 1;
    }
    (h, u)
}

/// A basis of `{x ∈ Zⁿ : A x = 0}`.
pub fn integer_kernel(a: &ZMatrix, n: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    }
    let (h, u) = column_hnf(a);
    (0..n)
        .filter(|&j| h.iter().all(|row| row[j].is_zero()))
        .map(|j| u.iter().map(|row| row[j].clone()).collect())
        .collect()
}
