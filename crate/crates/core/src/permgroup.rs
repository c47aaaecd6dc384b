//! Small permutation groups: closure, orbits and element-order fingerprints.
//!
//! Products are read left to right, `(p·q)(x) = q(p(x))`, so `(1 2)(1 3) = (1 2 3)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Closure stops once this many elements have been found.
pub const ORDER_GUARD: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("group order exceeds the guard of {0} elements")]
    OrderBoundExceeded(usize),
    #[error("no known group has fingerprint {0:?}")]
    UnknownFingerprint(BTreeMap<usize, usize>),
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

/// A permutation of `{0, …, n−1}`; shown 1-based in cycle notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    /// From 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                let y = c[(i + 1) % c.len()];
                if x == 0 || y == 0 || x > n || y > n {
                    return None;
                }
                images[x - 1] = y - 1;
            }
        }
        Permutation::from_images(images)
    }

    /// Parses `"(1 13 7 12)(2 9)"`; commas are accepted as separators.
    pub fn parse(n: usize, s: &str) -> Result<Self, PermError> {
        let err = || PermError::Parse(s.to_string());
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(Permutation::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for part in s.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let body = part.strip_prefix('(').ok_or_else(err)?;
            let c = body
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(c);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(n, &refs).ok_or_else(err)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self` first, then `o`.
    pub fn then(&self, o: &Permutation) -> Permutation {
        assert_eq!(self.degree(), o.degree(), "degree mismatch");
        Permutation { images: self.images.iter().map(|&x| o.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: u64) -> Permutation {
        (0..e).fold(Permutation::identity(self.degree()), |acc, _| acc.then(self))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Nontrivial cycles, 1-based, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = vec![];
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x + 1);
                x = self.images[x];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `[x, y] = x y x⁻¹ y⁻¹`, left to right.
pub fn commutator(x: &Permutation, y: &Permutation) -> Permutation {
    x.then(y).then(&x.inverse()).then(&y.inverse())
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        Ok(PermGroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, by breadth-first right multiplication with generators.
    pub fn closure(&self) -> Result<BTreeSet<Permutation>, PermError> {
        let id = Permutation::identity(self.degree);
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.then(g);
                if !seen.contains(&y) {
                    if seen.len() >= ORDER_GUARD {
                        return Err(PermError::OrderBoundExceeded(ORDER_GUARD));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    pub fn order(&self) -> Result<usize, PermError> {
        Ok(self.closure()?.len())
    }

    /// Orbits on `{1..n}`, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut orbit = BTreeSet::from([start]);
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for g in &self.generators {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.insert(y);
                        stack.push(y);
                    }
                }
            }
            out.push(orbit.into_iter().map(|x| x + 1).collect());
        }
        out
    }

    pub fn fingerprint(&self) -> Result<Fingerprint, PermError> {
        Ok(Fingerprint::of(self.closure()?.iter().map(Permutation::order)))
    }
}

/// Element-order multiset: order → number of elements of that order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint(pub BTreeMap<usize, usize>);

impl Fingerprint {
    pub fn of(orders: impl Iterator<Item = usize>) -> Self {
        let mut m = BTreeMap::new();
        for o in orders {
            *m.entry(o).or_insert(0) += 1;
        }
        Fingerprint(m)
    }

    pub fn group_order(&self) -> usize {
        self.0.values().sum()
    }

    /// Name of the matching reference group, from the brute-force matrix oracle.
    pub fn identify(&self) -> Result<&'static str, PermError> {
        if *self == gl2_f3_fingerprint(true) {
            Ok("SL(2,3)")
        } else if *self == gl2_f3_fingerprint(false) {
            Ok("GL(2,3)")
        } else {
            Err(PermError::UnknownFingerprint(self.0.clone()))
        }
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

type F3Mat = [[u8; 2]; 2];

fn f3_mul(a: &F3Mat, b: &F3Mat) -> F3Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 3))
}

/// Element orders of `GL(2, F₃)`, or of `SL(2, F₃)` when `det_one`, by enumerating all 81 matrices.
pub fn gl2_f3_fingerprint(det_one: bool) -> Fingerprint {
    let id: F3Mat = [[1, 0], [0, 1]];
    let mut orders = Vec::new();
    for code in 0..81u32 {
        let d = |k: u32| ((code / 3u32.pow(k)) % 3) as u8;
        let m: F3Mat = [[d(0), d(1)], [d(2), d(3)]];
        let det = (m[0][0] * m[1][1] + 2 * m[0][1] * m[1][0]) % 3;
        if det == 0 || (det_one && det != 1) {
            continue;
        }
        let mut p = m;
        let mut k = 1;
        while p != id {
            p = f3_mul(&p, &m);
            k += 1;
        }
        orders.push(k);
    }
    Fingerprint::of(orders.into_iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    #[test]
    fn left_to_right_convention() {
        assert_eq!(p(3, "(1 2)").then(&p(3, "(1 3)")), p(3, "(1 2 3)"));
        assert_eq!(p(3, "(1 2 3)").to_string(), "(1 2 3)");
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }

    #[test]
    fn parse_round_trip() {
        let s = "(1 13 7 12)(2 9 14 16)(3 5 15 6)(4 11 8 10)";
        assert_eq!(p(16, s).to_string(), s);
        assert_eq!(p(16, "(1, 13, 7, 12)(2, 9, 14, 16)(3, 5, 15, 6)(4, 11, 8, 10)"), p(16, s));
        assert!(Permutation::parse(3, "(1 4)").is_err());
        assert!(Permutation::parse(3, "(1 2)(2 3)").is_err());
    }

    #[test]
    fn oracle_fingerprints() {
        let sl = gl2_f3_fingerprint(true);
        assert_eq!(sl.0, BTreeMap::from([(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]));
        let gl = gl2_f3_fingerprint(false);
        assert_eq!(gl.group_order(), 48);
        assert_eq!(gl.0, BTreeMap::from([(1, 1), (2, 13), (3, 8), (4, 6), (6, 8), (8, 12)]));
        assert_eq!(sl.identify().unwrap(), "SL(2,3)");
        assert_eq!(gl.identify().unwrap(), "GL(2,3)");
    }

    #[test]
    fn small_groups() {
        let g = PermGroup::new(16, vec![Permutation::identity(16)]).unwrap();
        assert_eq!(g.order().unwrap(), 1);
        assert_eq!(g.orbits().len(), 16);
        let c2 = PermGroup::new(2, vec![p(2, "(1 2)")]).unwrap();
        assert_eq!(c2.fingerprint().unwrap().0, BTreeMap::from([(1, 1), (2, 1)]));
        assert!(matches!(c2.fingerprint().unwrap().identify(), Err(PermError::UnknownFingerprint(_))));
        // S_8 has 40320 elements
        let s8 = PermGroup::new(8, vec![p(8, "(1 2)"), p(8, "(1 2 3 4 5 6 7 8)")]).unwrap();
        assert_eq!(s8.order(), Err(PermError::OrderBoundExceeded(ORDER_GUARD)));
        assert!(PermGroup::new(3, vec![Permutation::identity(4)]).is_err());
    }

    #[test]
    fn symmetric_group_s4() {
        let s4 = PermGroup::new(4, vec![p(4, "(1 2)"), p(4, "(1 2 3 4)")]).unwrap();
        assert_eq!(s4.order().unwrap(), 24);
        assert_eq!(s4.fingerprint().unwrap().0, BTreeMap::from([(1, 1), (2, 9), (3, 8), (4, 6)]));
        // same order as SL(2,3), different fingerprint
        assert!(s4.fingerprint().unwrap().identify().is_err());
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn group_axioms(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
            prop_assert!(a.then(&a.inverse()).is_identity());
            prop_assert!(a.pow(a.order() as u64).is_identity());
            let x = a.apply(3);
            prop_assert_eq!(a.then(&b).apply(3), b.apply(x));
        }

        #[test]
        fn lagrange_and_generator_order(a in arb_perm(6), b in arb_perm(6)) {
            let g = PermGroup::new(6, vec![a.clone(), b.clone()]).unwrap();
            let h = PermGroup::new(6, vec![b, a]).unwrap();
            let order = g.order().unwrap();
            prop_assert_eq!(g.closure().unwrap(), h.closure().unwrap());
            for orbit in g.orbits() {
                prop_assert_eq!(order % orbit.len(), 0);
            }
            prop_assert_eq!(g.fingerprint().unwrap().group_order(), order);
        }
    }
}
