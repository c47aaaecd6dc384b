//! Verification report: recomputes every number of the classification and diffs it
//! against the embedded expected values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigInt, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::appell_humbert::{
    branch_bundle, cover_branch_bundle, cover_square_roots, curve_form, im_on_lattice, intersection_number, self_intersection,
    square_roots, AltFormOnLattice, HermitianForm,
};
use crate::eisenstein::{rat, EisMatrix, EisRat};
use crate::lattice::{self, cover_lattice, e1, e2, hnf, lambda1, lambda2, product_lattice, LatticeBasis};
use crate::permgroup::{gl2_f3_fingerprint, PermGroup, Permutation};
use crate::surface_invariants::{
    ball_quotient_check_with, double_cover_invariants, enumerate_branch_profiles, product_quotient_invariants,
    resolution_invariants, SingularityProfile,
};
use crate::symmetry::{
    action_on_square_roots, cross_ratio, from_tilde, g2, g2_tilde, g3, g3_tilde, gamma_action_on_sigma, minus_identity,
    preserves_divisor, rational_rep, search_generators, sigma, tangent_line_permutation, tangent_points, tau,
    verify_presentation,
};
use crate::torsion_covers::{
    all_characters, branch_form, check_2divisible, classify_characters, kernel_lattice, odd_witness, restricts_nontrivially,
    IsogenyDatum,
};

const EXPECTED_V1: &str = include_str!("../data/expected_v1.json");

#[derive(Clone, Debug, Deserialize)]
struct ExpectedFile {
    version: u32,
    checks: Vec<ExpectedRecord>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExpectedRecord {
    pub check_id: String,
    pub anchor: String,
    pub expected: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check_id: String,
    pub anchor: String,
    pub expected: Value,
    pub computed: Value,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Section {
    Tables,
    Characters,
    Orbits,
    Invariants,
    SearchAut,
}

impl Section {
    pub const ALL: [Section; 5] = [Section::Tables, Section::Characters, Section::Orbits, Section::Invariants, Section::SearchAut];

    pub fn name(self) -> &'static str {
        match self {
            Section::Tables => "tables",
            Section::Characters => "characters",
            Section::Orbits => "orbits",
            Section::Invariants => "invariants",
            Section::SearchAut => "search-aut",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Section::SearchAut => "search",
            s => s.name(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub section: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: u32,
    pub sections: Vec<SectionReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub bound: i64,
    pub perturb: Option<String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("bound must be at least 2, got {0}")]
    BoundTooSmall(i64),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
}

pub fn expected_records() -> Vec<ExpectedRecord> {
    let f: ExpectedFile = serde_json::from_str(EXPECTED_V1).expect("embedded expected values parse");
    f.checks
}

fn expected_version() -> u32 {
    serde_json::from_str::<ExpectedFile>(EXPECTED_V1).expect("embedded expected values parse").version
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("small integer")
}

fn upper_triangle(e: &AltFormOnLattice) -> Value {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            out.push(to_i64(&e.entry(i, j).to_integer()));
        }
    }
    json!(out)
}

/// The matrix of `h` as printed, i.e. in units of `2/√3`.
fn printed_hermitian(h: &HermitianForm) -> Value {
    let m = h.matrix().scale(&num::BigRational::new(1.into(), 2.into()));
    json!(m.m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_value(m: &EisMatrix) -> Value {
    json!(m.m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn perm_value(p: &Permutation) -> Value {
    json!(p.to_string())
}

fn gram(l: &LatticeBasis) -> (Vec<Vec<i64>>, i64) {
    let mut g = vec![vec![0i64; 4]; 4];
    let mut q = vec![vec![rat(0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let x = intersection_number(&curve_form(i + 1), &curve_form(j + 1), l).expect("integral");
            g[i][j] = to_i64(&x);
            q[i][j] = num::BigRational::from_integer(x);
        }
    }
    let d = lattice::det_q(&q);
    (g, to_i64(&d.to_integer()))
}

fn tables() -> Vec<(&'static str, Value)> {
    let p = product_lattice();
    let a = cover_lattice();
    let h = branch_bundle().form;
    let mut out = vec![
        ("tables.im_h_product", upper_triangle(&im_on_lattice(&h, &p))),
        ("tables.im_h_cover", upper_triangle(&im_on_lattice(&cover_branch_bundle().form, &a))),
    ];
    let ids = ["tables.hermitian_1", "tables.hermitian_2", "tables.hermitian_3", "tables.hermitian_4"];
    for (k, id) in ids.into_iter().enumerate() {
        out.push((id, printed_hermitian(&curve_form(k + 1))));
    }
    out.push(("tables.hermitian_sum", printed_hermitian(&h)));

    // closed form of χ_{D_{A'}} on the 16 parity classes of (a₁, …, a₄)
    let d = branch_bundle();
    let mut agree = 0;
    for bits in 0..16u32 {
        let c: [i64; 4] = std::array::from_fn(|i| ((bits >> (3 - i)) & 1) as i64);
        let [a1, a2, a3, a4] = c;
        let e = a1 + a2 + a3 + a4 + a1 * (a2 + a3 + a4) + (a2 + a3) * a4;
        let want = if e % 2 == 0 { rat(0) } else { num::BigRational::new(1.into(), 2.into()) };
        let v = lattice::AmbientVector::from_ints(c);
        if d.character.eval(&v).expect("lattice vector") == want {
            agree += 1;
        }
    }
    out.push(("tables.branch_semicharacter_closed_form", json!(agree)));

    let theta = curve_form(1).add(&curve_form(2));
    out.push(("tables.pfaffian_product_polarization", json!(im_on_lattice(&theta, &p).pfaffian().to_string())));
    out.push(("tables.pfaffian_branch_product", json!(im_on_lattice(&h, &p).pfaffian().to_string())));
    out.push(("tables.self_intersection_product", json!(to_i64(&self_intersection(&h, &p).unwrap()))));
    out.push(("tables.self_intersection_cover", json!(to_i64(&self_intersection(&h, &a).unwrap()))));
    let (gp, dp) = gram(&p);
    out.push(("tables.curve_gram_product", json!({"gram": gp, "det": dp})));
    let (ga, da) = gram(&a);
    out.push(("tables.curve_gram_cover", json!({"gram": ga, "det": da})));
    out
}

fn characters() -> Vec<(&'static str, Value)> {
    let c = classify_characters();
    let chars = all_characters();
    let p = product_lattice();
    let divisible: Vec<usize> = (1..16).filter(|&i| check_2divisible(&chars[i]).unwrap()).collect();
    let equivalence = (1..16).all(|i| {
        let x = &chars[i];
        let div = check_2divisible(x).unwrap();
        let irr = (1..=4).all(|k| restricts_nontrivially(x, &lattice::curve_lattice(k)));
        let roots = square_roots(&IsogenyDatum::new(x).unwrap().branch_bundle()).len();
        div == irr && roots == if div { 16 } else { 0 } && odd_witness(x).unwrap().is_some() != div
    });
    let printed = [
        vec![e1(), lambda1().add(&e2()), lambda2().add(&e2()), e2().scale(&rat(2))],
        vec![lambda2().add(&e1()), lambda1(), e2(), e1().scale(&rat(2))],
        vec![lambda1().add(&e2()), lambda2(), e2().scale(&rat(2)), e1().add(&e2())],
    ];
    let kernels: Vec<bool> = printed
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let b = LatticeBasis::new(b).unwrap();
            let k = kernel_lattice(&chars[i + 1]).unwrap();
            hnf(&k, &p).unwrap() == hnf(&b, &p).unwrap()
        })
        .collect();
    let h = branch_form();
    let witness = h.im(&lambda1().add(&e2()), &lambda2().add(&e2()));
    let mut leftover_chars = c.leftover_characters.clone();
    leftover_chars.sort();
    vec![
        ("characters.admissible", json!(c.admissible)),
        ("characters.two_divisible", json!(divisible)),
        ("characters.equivalences", json!(equivalence)),
        ("characters.kernel_bases", json!(kernels)),
        ("characters.even_pairing_witness", json!(witness.to_string())),
        ("characters.points_per_curve", json!(c.points_per_curve)),
        ("characters.leftover_two_torsion", json!(c.leftover.len())),
        ("characters.leftover_characters", json!(leftover_chars)),
        ("characters.cover_semicharacter", json!(cover_branch_bundle().character.labels())),
        ("characters.square_roots_product", json!(square_roots(&branch_bundle()).len())),
        (
            "characters.square_roots_cover",
            json!(cover_square_roots().iter().map(|r| r.character.labels().join(" ")).collect::<Vec<_>>()),
        ),
    ]
}

fn orbit_lists(g: &PermGroup) -> Value {
    json!(g.orbits())
}

fn orbits() -> Vec<(&'static str, Value)> {
    let roots = cover_square_roots();
    let rho = |g| action_on_square_roots(&g, &roots).expect("divisor-preserving");
    let (r2, r3, rt, rm, rs) = (rho(g2()), rho(g3()), rho(tau()), rho(minus_identity()), rho(sigma()));
    let aut = PermGroup::new(16, vec![r2.clone(), r3.clone(), rt.clone()]).unwrap();
    let kl = PermGroup::new(16, vec![r2.clone(), r3.clone(), rt.clone(), rs.clone()]).unwrap();
    let id_of = |g: &PermGroup| -> Value {
        let f = g.fingerprint().unwrap();
        let name = f.identify().ok();
        // identification goes through the brute-force matrix-group oracle
        let oracle_ok = name.map(|n| f == gl2_f3_fingerprint(n == "SL(2,3)")).unwrap_or(false);
        json!({"name": name, "matches_oracle": oracle_ok})
    };
    let aut_orbits = aut.orbits();
    let kl_orbits = kl.orbits();
    vec![
        ("orbits.rho_g2", perm_value(&r2)),
        ("orbits.rho_g3", perm_value(&r3)),
        ("orbits.rho_tau", perm_value(&rt)),
        ("orbits.rho_minus_identity", perm_value(&rm)),
        ("orbits.rho_sigma", perm_value(&rs)),
        ("orbits.aut_order", json!(aut.order().unwrap())),
        ("orbits.aut_group", id_of(&aut)),
        ("orbits.aut_orbits", orbit_lists(&aut)),
        ("orbits.kl_order", json!(kl.order().unwrap())),
        ("orbits.kl_group", id_of(&kl)),
        ("orbits.kl_orbits", orbit_lists(&kl)),
        (
            "orbits.conclusion",
            json!({"isomorphism_classes": aut_orbits.len(), "up_to_conjugation": kl_orbits.len()}),
        ),
    ]
}

fn invariants() -> Vec<(&'static str, Value)> {
    let res = |l2, ms: Vec<i64>| {
        let r = resolution_invariants(&SingularityProfile::new(l2, ms).unwrap());
        json!([r.chi.to_string(), r.k2])
    };
    let e = enumerate_branch_profiles(8).unwrap();
    let cases: Vec<Value> = e
        .cases
        .iter()
        .map(|c| json!({"label": format!("{:?}", c.label), "d2": c.d2, "singularities": c.singularities}))
        .collect();
    let excluded: Vec<Value> = e.excluded.iter().map(|x| json!(x.multiplicities)).collect();
    let dc = |d2, n| json!(double_cover_invariants(d2, n).unwrap());
    let pq: Vec<Value> =
        [(3, 4), (2, 1), (5, 16)].iter().map(|&(g, n)| json!(product_quotient_invariants(g, n).unwrap())).collect();
    let d_a2 = to_i64(&self_intersection(&branch_bundle().form, &cover_lattice()).unwrap());
    let b = ball_quotient_check_with(8, 1);
    vec![
        ("invariants.resolution_type_i", res(8, vec![3])),
        ("invariants.resolution_type_ii", res(6, vec![2, 2])),
        ("invariants.branch_cases", json!(cases)),
        ("invariants.excluded_profiles", json!(excluded)),
        ("invariants.double_cover_24_2", dc(24, 2)),
        ("invariants.double_cover_from_branch", json!({"d2": d_a2, "chi_k2": double_cover_invariants(d_a2, 2).unwrap()})),
        ("invariants.product_quotients", json!(pq)),
        ("invariants.ball_quotient_elliptic_minus_one", json!(b.four_curves)),
        ("invariants.ball_quotient_elliptic_minus_two", json!(b.two_curves)),
    ]
}

fn search_aut(bound: i64) -> Vec<(&'static str, Value)> {
    let hits = search_generators(bound);
    let targets = [g2_tilde(), g2_tilde().neg(), g3_tilde(), g3_tilde().neg()];
    let found: Vec<Value> =
        targets.iter().filter(|t| hits.iter().any(|h| h.tilde == **t)).map(matrix_value).collect();
    let la = cover_lattice();
    let preserved = [g2(), g3()].iter().all(|g| rational_rep(g, &la).is_ok() && preserves_divisor(g).unwrap());
    let pts = tangent_points();
    let cr: EisRat = cross_ratio([&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap();
    let gamma = gamma_action_on_sigma();
    let columns = |g| {
        let m = rational_rep(&g, &la).unwrap();
        json!((0..4).map(|j| (0..4).map(|i| to_i64(&m[i][j])).collect::<Vec<_>>()).collect::<Vec<_>>())
    };
    vec![
        ("search.generators_found", json!(found)),
        ("search.conjugated_g2", matrix_value(&from_tilde(&g2_tilde()))),
        ("search.conjugated_g3", matrix_value(&from_tilde(&g3_tilde()))),
        ("search.conjugation_matches", json!(from_tilde(&g2_tilde()) == g2().linear && from_tilde(&g3_tilde()) == g3().linear)),
        ("search.preserve_lattice_and_divisor", json!(preserved)),
        ("search.rational_rep_g2", columns(g2())),
        ("search.rational_rep_g3", columns(g3())),
        ("search.presentation", json!(verify_presentation(&g2(), &g3()))),
        ("search.line_permutations", json!([
            tangent_line_permutation(&g2()).unwrap().to_string(),
            tangent_line_permutation(&g3()).unwrap().to_string(),
            tangent_line_permutation(&sigma()).unwrap().to_string(),
        ])),
        ("search.cross_ratio", json!(cr.to_string())),
        ("search.cross_ratio_is_inverse_zeta", json!(Some(cr) == EisRat::zeta().inverse())),
        ("search.gamma_order", json!(gamma.order)),
        ("search.gamma_on_sigma", perm_value(&gamma.on_sigma)),
    ]
}

fn computed(section: Section, opts: &Options) -> Vec<(&'static str, Value)> {
    match section {
        Section::Tables => tables(),
        Section::Characters => characters(),
        Section::Orbits => orbits(),
        Section::Invariants => invariants(),
        Section::SearchAut => search_aut(opts.bound),
    }
}

/// Runs the given sections in order and compares against the expected values.
pub fn run(sections: &[Section], opts: &Options) -> Result<VerificationReport, ReportError> {
    if sections.contains(&Section::SearchAut) && opts.bound < 2 {
        return Err(ReportError::BoundTooSmall(opts.bound));
    }
    let records = expected_records();
    let by_id: BTreeMap<&str, &ExpectedRecord> = records.iter().map(|r| (r.check_id.as_str(), r)).collect();
    if let Some(id) = &opts.perturb {
        let in_scope = sections.iter().any(|s| id.starts_with(&format!("{}.", s.prefix())));
        if !by_id.contains_key(id.as_str()) || !in_scope {
            return Err(ReportError::UnknownCheck(id.clone()));
        }
    }
    let mut out = Vec::new();
    for &s in sections {
        let mut checks = Vec::new();
        let values = computed(s, opts);
        for (id, value) in values {
            let (anchor, mut expected) = match by_id.get(id) {
                Some(r) => (r.anchor.clone(), r.expected.clone()),
                None => ("missing expected value".to_string(), Value::Null),
            };
            if opts.perturb.as_deref() == Some(id) {
                expected = json!({"perturbed": expected});
            }
            let status = if expected == value { Status::Pass } else { Status::Fail };
            checks.push(Check { check_id: id.to_string(), anchor, expected, computed: value, status });
        }
        // records of this section that nothing computed
        let prefix = format!("{}.", s.prefix());
        for r in records.iter().filter(|r| r.check_id.starts_with(&prefix)) {
            if !checks.iter().any(|c| c.check_id == r.check_id) {
                checks.push(Check {
                    check_id: r.check_id.clone(),
                    anchor: r.anchor.clone(),
                    expected: r.expected.clone(),
                    computed: Value::Null,
                    status: Status::Fail,
                });
            }
        }
        out.push(SectionReport { section: s.name().to_string(), checks });
    }
    let passed = out.iter().all(|s| s.checks.iter().all(|c| c.status == Status::Pass));
    Ok(VerificationReport { version: expected_version(), sections: out, passed })
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}

impl VerificationReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for sec in &self.sections {
            let _ = writeln!(s, "== {} ==", sec.section);
            for c in &sec.checks {
                let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{tag}  {:<44} {}", c.check_id, c.anchor);
                if c.status == Status::Pass {
                    let _ = writeln!(s, "      value:    {}", compact(&c.computed));
                } else {
                    let _ = writeln!(s, "      expected: {}", compact(&c.expected));
                    let _ = writeln!(s, "      computed: {}", compact(&c.computed));
                }
            }
        }
        let total: usize = self.sections.iter().map(|x| x.checks.len()).sum();
        let failed: usize = self.sections.iter().flat_map(|x| &x.checks).filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(s, "{} checks, {} failed", total, failed);
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_checks_correspond() {
        let records = expected_records();
        let mut ids: Vec<&str> = records.iter().map(|r| r.check_id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), records.len());
        let r = run(&Section::ALL, &Options { bound: 3, perturb: None }).unwrap();
        let computed: Vec<&Check> = r.sections.iter().flat_map(|s| &s.checks).collect();
        assert_eq!(computed.len(), records.len());
        assert!(computed.iter().all(|c| c.computed != Value::Null));
        assert!(r.passed);
    }

    #[test]
    fn option_errors() {
        let perturb = Some("tables.nope".to_string());
        assert_eq!(
            run(&[Section::Tables], &Options { bound: 3, perturb }).unwrap_err(),
            ReportError::UnknownCheck("tables.nope".into())
        );
        assert_eq!(run(&[Section::SearchAut], &Options { bound: 1, perturb: None }).unwrap_err(), ReportError::BoundTooSmall(1));
        // the bound only matters for the search
        assert!(run(&[Section::Tables], &Options { bound: 0, perturb: None }).unwrap().passed);
    }
}
