//! Root systems by closing the simple roots under the simple reflections.
//!
//! Roots are integer coefficient vectors over the simple roots. The main
//! closure works with the Cartan matrix alone; a second closure computes
//! reflections from the invariant form in ℚ(√2, √3) and serves as an
//! independent check.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::Sign;
use crate::{CartanError, CartanMatrix, Qf, QfMatrix, Rational, SymCartanMatrix};

/// Coefficients `k_i` of `Σ k_i α_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RootVector {
    pub k: Vec<i64>,
}

impl RootVector {
    pub fn new(k: Vec<i64>) -> Self {
        RootVector { k }
    }

    /// The simple root `α_i` of a rank `l` system.
    pub fn simple(l: usize, i: usize) -> Self {
        let mut k = vec![0; l];
        k[i] = 1;
        RootVector { k }
    }

    pub fn neg(&self) -> Self {
        RootVector { k: self.k.iter().map(|x| -x).collect() }
    }

    /// All coefficients `≥ 0` or all `≤ 0`.
    pub fn is_sign_coherent(&self) -> bool {
        self.k.iter().all(|&x| x >= 0) || self.k.iter().all(|&x| x <= 0)
    }

    fn max_abs(&self) -> i64 {
        self.k.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.k)
    }
}

/// What stopped a closure that did not finish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardTrigger {
    /// A coefficient exceeded the bound; the offending vector.
    Coefficient { bound: i64, root: RootVector },
    /// The set grew past the cap.
    Count { limit: usize },
}

impl fmt::Display for GuardTrigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardTrigger::Coefficient { bound, root } => write!(f, "coefficient bound {bound} exceeded by {root}"),
            GuardTrigger::Count { limit } => write!(f, "more than {limit} roots"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootsError {
    #[error("simple root index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("closure not finite within guard: {0}")]
    NotFiniteWithinGuard(GuardTrigger),
    #[error(transparent)]
    NotSymmetrisable(#[from] CartanError),
    #[error("vector has length {len}, expected {rank}")]
    LengthMismatch { len: usize, rank: usize },
}

/// Limits that make the closure terminate on every input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_coefficient: i64,
    pub max_roots: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_coefficient: 30, max_roots: 1_000_000 }
    }
}

impl Guard {
    pub fn with_coefficient(max_coefficient: i64) -> Self {
        Guard { max_coefficient, ..Guard::default() }
    }
}

/// A finite set of roots closed under the simple reflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    cartan: CartanMatrix,
    roots: Vec<RootVector>,
    gram: SymCartanMatrix,
}

impl RootSystem {
    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    /// Roots in lexicographic order.
    pub fn roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn gram(&self) -> &SymCartanMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: &RootVector) -> bool {
        self.roots.binary_search(r).is_ok()
    }

    /// Same Cartan data with an arbitrary vector set, e.g. to exercise the
    /// verifier on broken input.
    pub fn with_roots(&self, mut roots: Vec<RootVector>) -> Self {
        roots.sort();
        roots.dedup();
        RootSystem { roots, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        let norms: Vec<Value> = root_norms(self)
            .into_iter()
            .map(|(value, count)| json!({"value": value, "count": count}))
            .collect();
        json!({
            "rank": self.rank(),
            "count": self.len(),
            "roots": self.roots,
            "norms": norms,
        })
    }
}

/// `k' = k - (Σ_j A_ij k_j) e_i`.
pub fn simple_reflection(a: &CartanMatrix, i: usize, k: &RootVector) -> Result<RootVector, RootsError> {
    let l = a.rank();
    if i >= l {
        return Err(RootsError::IndexOutOfRange { index: i, rank: l });
    }
    if k.k.len() != l {
        return Err(RootsError::LengthMismatch { len: k.k.len(), rank: l });
    }
    Ok(reflect(a, i, k))
}

fn reflect(a: &CartanMatrix, i: usize, k: &RootVector) -> RootVector {
    let s: i64 = a.entries()[i].iter().zip(&k.k).map(|(x, y)| x * y).sum();
    let mut out = k.k.clone();
    out[i] -= s;
    RootVector { k: out }
}

/// Closure of the simple roots with the default guard and coefficient
/// bound `guard`.
pub fn generate_roots(a: &CartanMatrix, guard: i64) -> Result<RootSystem, RootsError> {
    generate_roots_with(a, Guard::with_coefficient(guard))
}

pub fn generate_roots_with(a: &CartanMatrix, guard: Guard) -> Result<RootSystem, RootsError> {
    closure(a, guard, false)
}

/// Worklist closure; `lifo` only changes the visiting order.
pub(crate) fn closure(a: &CartanMatrix, guard: Guard, lifo: bool) -> Result<RootSystem, RootsError> {
    let gram = a.symmetrise()?;
    let l = a.rank();
    let mut seen: HashSet<RootVector> = HashSet::new();
    let mut work = VecDeque::new();
    for i in 0..l {
        let e = RootVector::simple(l, i);
        seen.insert(e.clone());
        work.push_back(e);
    }
    let next = |w: &mut VecDeque<RootVector>| if lifo { w.pop_back() } else { w.pop_front() };
    while let Some(r) = next(&mut work) {
        for i in 0..l {
            let s = reflect(a, i, &r);
            if seen.contains(&s) {
                continue;
            }
            if s.max_abs() > guard.max_coefficient {
                return Err(RootsError::NotFiniteWithinGuard(GuardTrigger::Coefficient {
                    bound: guard.max_coefficient,
                    root: s,
                }));
            }
            if seen.len() >= guard.max_roots {
                return Err(RootsError::NotFiniteWithinGuard(GuardTrigger::Count { limit: guard.max_roots }));
            }
            seen.insert(s.clone());
            work.push_back(s);
        }
    }
    let mut roots: Vec<RootVector> = seen.into_iter().collect();
    roots.sort();
    Ok(RootSystem { cartan: a.clone(), roots, gram })
}

/// `(α_i, α_j) = ½ c_i c_j B_ij`.
pub fn gram_matrix(sym: &SymCartanMatrix) -> QfMatrix {
    let l = sym.rank();
    let half = Qf::from_rational(Rational::new(1.into(), 2.into()));
    let c: Vec<Qf> = (0..l).map(|i| sym.scale(i)).collect();
    QfMatrix::from_fn(l, |i, j| &(&half * &c[i]) * &(&c[j] * &sym.matrix()[(i, j)]))
}

/// Invariant form on coefficient vectors.
struct Form {
    g: QfMatrix,
}

impl Form {
    /// `G k` for repeated pairing with the same vector.
    fn image(&self, k: &RootVector) -> Vec<Qf> {
        let l = self.g.dim();
        (0..l)
            .map(|i| {
                (0..l).fold(Qf::zero(), |acc, j| {
                    if k.k[j] == 0 {
                        acc
                    } else {
                        acc + &self.g[(i, j)] * &Qf::from_i64(k.k[j])
                    }
                })
            })
            .collect()
    }

    fn pair(&self, x: &RootVector, gy: &[Qf]) -> Qf {
        x.k.iter().zip(gy).fold(Qf::zero(), |acc, (&k, g)| if k == 0 { acc } else { acc + g * &Qf::from_i64(k) })
    }

    /// `2(β, α)/(α, α)` when it is an integer.
    // The error carries the non-integral value.
    fn cartan_integer(&self, beta: &RootVector, g_alpha: &[Qf], norm_alpha: &Qf) -> Result<i64, Box<Qf>> {
        let q = &(Qf::from_i64(2) * &self.pair(beta, g_alpha)) / norm_alpha;
        match q.to_rational() {
            Some(r) if r.is_integer() => r.to_integer().try_into().map_err(|_| Box::new(q.clone())),
            _ => Err(Box::new(q)),
        }
    }
}

fn axpy(beta: &RootVector, n: i64, alpha: &RootVector) -> RootVector {
    RootVector { k: beta.k.iter().zip(&alpha.k).map(|(b, a)| b - n * a).collect() }
}

/// Closure computed with orthogonal reflections in the invariant form
/// instead of the Cartan matrix entries.
pub fn generate_roots_gram(a: &CartanMatrix, guard: Guard) -> Result<Vec<RootVector>, RootsError> {
    let sym = a.symmetrise()?;
    let form = Form { g: gram_matrix(&sym) };
    let l = a.rank();
    let simple: Vec<RootVector> = (0..l).map(|i| RootVector::simple(l, i)).collect();
    let images: Vec<Vec<Qf>> = simple.iter().map(|e| form.image(e)).collect();
    let norms: Vec<Qf> = (0..l).map(|i| form.pair(&simple[i], &images[i])).collect();
    let mut seen: BTreeMap<RootVector, ()> = simple.iter().map(|e| (e.clone(), ())).collect();
    let mut work: Vec<RootVector> = simple.clone();
    while let Some(beta) = work.pop() {
        for i in 0..l {
            let n = form
                .cartan_integer(&beta, &images[i], &norms[i])
                .expect("simple reflections have integer coefficients");
            let s = axpy(&beta, n, &simple[i]);
            if seen.contains_key(&s) {
                continue;
            }
            if s.max_abs() > guard.max_coefficient {
                return Err(RootsError::NotFiniteWithinGuard(GuardTrigger::Coefficient {
                    bound: guard.max_coefficient,
                    root: s,
                }));
            }
            if seen.len() >= guard.max_roots {
                return Err(RootsError::NotFiniteWithinGuard(GuardTrigger::Count { limit: guard.max_roots }));
            }
            seen.insert(s.clone(), ());
            work.push(s);
        }
    }
    Ok(seen.into_keys().collect())
}

/// One check of [`verify_root_system`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Offending vectors, when the check failed.
    pub witness: Vec<RootVector>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Exact check of the root system axioms:
/// `reflection_closure`: `w_α β ∈ R` for all `α, β ∈ R`;
/// `integrality`: `2(β, α)/(α, α) ∈ ℤ`;
/// `reduced`: `tα ∈ R` only for `t = ±1`;
/// `norm_bound`: `(α, α) ≤ max_i (α_i, α_i)`;
/// `sign_coherence`: coefficients all `≥ 0` or all `≤ 0`.
pub fn verify_root_system(rs: &RootSystem) -> VerificationReport {
    let form = Form { g: gram_matrix(rs.gram()) };
    let roots = rs.roots();
    let images: Vec<Vec<Qf>> = roots.iter().map(|r| form.image(r)).collect();
    let norms: Vec<Qf> = roots.iter().zip(&images).map(|(r, g)| form.pair(r, g)).collect();

    let mut closure_fail: Option<(RootVector, RootVector, RootVector)> = None;
    let mut integer_fail: Option<(RootVector, RootVector, Qf)> = None;
    'outer: for (a, alpha) in roots.iter().enumerate() {
        if norms[a].sign() != Sign::Positive {
            integer_fail = Some((alpha.clone(), alpha.clone(), norms[a].clone()));
            break;
        }
        for beta in roots {
            match form.cartan_integer(beta, &images[a], &norms[a]) {
                Ok(n) => {
                    let image = axpy(beta, n, alpha);
                    if closure_fail.is_none() && !rs.contains(&image) {
                        closure_fail = Some((alpha.clone(), beta.clone(), image));
                    }
                }
                Err(q) => {
                    integer_fail = Some((alpha.clone(), beta.clone(), *q));
                    break 'outer;
                }
            }
        }
    }

    let mut checks = Vec::new();
    checks.push(match closure_fail {
        None if integer_fail.is_none() => pass("reflection_closure"),
        None => Check {
            name: "reflection_closure",
            passed: false,
            witness: vec![],
            detail: Some("not evaluated past a non-integral pairing".into()),
        },
        Some((alpha, beta, image)) => Check {
            name: "reflection_closure",
            passed: false,
            detail: Some(format!("w_{alpha} {beta} = {image} is missing")),
            witness: vec![alpha, beta, image],
        },
    });
    checks.push(match integer_fail {
        None => pass("integrality"),
        Some((alpha, beta, q)) => Check {
            name: "integrality",
            passed: false,
            detail: Some(format!("2(β, α)/(α, α) = {q}")),
            witness: vec![alpha, beta],
        },
    });
    checks.push(reducedness(roots));
    checks.push(norm_bound(rs, &form, &norms));
    checks.push(match roots.iter().find(|r| !r.is_sign_coherent()) {
        None => pass("sign_coherence"),
        Some(r) => Check { name: "sign_coherence", passed: false, witness: vec![r.clone()], detail: None },
    });
    VerificationReport { passed: checks.iter().all(|c| c.passed), checks }
}

fn pass(name: &'static str) -> Check {
    Check { name, passed: true, witness: vec![], detail: None }
}

fn reducedness(roots: &[RootVector]) -> Check {
    let mut lines: BTreeMap<Vec<i64>, Vec<&RootVector>> = BTreeMap::new();
    for r in roots {
        let g = r.k.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Check { name: "reduced", passed: false, witness: vec![r.clone()], detail: Some("zero vector".into()) };
        }
        let mut dir: Vec<i64> = r.k.iter().map(|x| x / g).collect();
        if dir.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            dir.iter_mut().for_each(|x| *x = -*x);
        }
        lines.entry(dir).or_default().push(r);
    }
    for members in lines.values() {
        let ok = match members.as_slice() {
            [_] => true,
            [a, b] => a.neg() == **b,
            _ => false,
        };
        if !ok {
            return Check {
                name: "reduced",
                passed: false,
                witness: members.iter().map(|r| (*r).clone()).collect(),
                detail: Some("proportional roots other than ±α".into()),
            };
        }
    }
    pass("reduced")
}

fn norm_bound(rs: &RootSystem, form: &Form, norms: &[Qf]) -> Check {
    let l = rs.rank();
    let simple_max = (0..l)
        .map(|i| {
            let e = RootVector::simple(l, i);
            form.pair(&e, &form.image(&e))
        })
        .reduce(|a, b| if (&a - &b).sign() == Sign::Negative { b } else { a });
    let Some(max) = simple_max else { return pass("norm_bound") };
    match rs.roots().iter().zip(norms).find(|(_, n)| (*n - &max).sign() == Sign::Positive) {
        None => pass("norm_bound"),
        Some((r, n)) => Check {
            name: "norm_bound",
            passed: false,
            witness: vec![r.clone()],
            detail: Some(format!("(α, α) = {n} exceeds {max}")),
        },
    }
}

/// Distinct squared lengths `(α, α)` with their multiplicities, shortest
/// first, in the normalisation `(α_i, α_i) = c²_i`.
pub fn root_norms(rs: &RootSystem) -> Vec<(Qf, usize)> {
    let form = Form { g: gram_matrix(rs.gram()) };
    let mut out: Vec<(Qf, usize)> = Vec::new();
    for r in rs.roots() {
        let n = form.pair(r, &form.image(r));
        match out.iter_mut().find(|(v, _)| *v == n) {
            Some((_, c)) => *c += 1,
            None => out.push((n, 1)),
        }
    }
    out.sort_by(|a, b| (&a.0 - &b.0).sign().cmp(&Sign::Zero));
    out
}
