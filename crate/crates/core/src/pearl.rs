//! Pearl complexes: free cochain complexes over a graded coefficient ring,
//! assembled from counts of pearly trajectories.
//!
//! A generator `x` of Morse index `|x|` contributes `x t^j` in degree
//! `|x| + j·N`. The differential is `dy = Σ #P(x, y, A) x t^{μ̄(A)}`, where the
//! only admissible terms satisfy `|x| + μ̄·N = |y| + 1`.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::chain::{Cochain, SparseMap};
use crate::error::Error;
use crate::gf2::{BitMatrix, BitVec, TaggedEchelon};
use crate::graded::{Model, View};
use crate::ring::{LaurentElement, RingKind, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub index: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, index: i64) -> Self {
        Generator { id: id.into(), index }
    }
}

/// One count `#P(x, y, A)` contributing `count · x t^{mu_bar}` to `dy`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffTerm {
    pub x: String,
    pub y: String,
    pub mu_bar: i64,
    pub count: u8,
}

impl DiffTerm {
    pub fn new(x: impl Into<String>, y: impl Into<String>, mu_bar: i64) -> Self {
        DiffTerm { x: x.into(), y: y.into(), mu_bar, count: 1 }
    }
}

/// Combinatorial input for a pearl complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PearlData {
    pub name: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub diff_terms: Vec<DiffTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti_hint: Option<Vec<usize>>,
}

impl PearlData {
    pub fn new(name: impl Into<String>, n: u32, generators: Vec<Generator>) -> Self {
        PearlData { name: name.into(), n, generators, diff_terms: Vec::new(), unit: None, betti_hint: None }
    }
}

pub(crate) fn check_count(count: u8, what: &str) -> Result<bool, Error> {
    match count {
        0 => Ok(false),
        1 => Ok(true),
        c => Err(Error::InvalidData(format!("count {c} in {what} is not 0 or 1"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PearlComplex {
    name: String,
    ring: RingSpec,
    generators: Vec<Generator>,
    lookup: HashMap<String, usize>,
    differential: SparseMap,
}

impl PearlComplex {
    /// Builds the complex with the stated differential over `ring`.
    ///
    /// The ring's generator degree must equal `data.n`; ambient complexes are
    /// obtained from Laurent ones with [`PearlComplex::to_ambient`].
    pub fn build(data: &PearlData, ring: RingSpec) -> Result<Self, Error> {
        if ring.kind() == RingKind::Ambient || ring.generator_degree() != data.n {
            return Err(Error::RingMismatch(format!("data has N = {} but ring is {:?}", data.n, ring)));
        }
        let mut complex = Self::from_parts(&data.name, ring, data.generators.clone(), None)?;
        for term in &data.diff_terms {
            let x = complex.find(&term.x)?;
            let y = complex.find(&term.y)?;
            let lhs = complex.generators[x].index + term.mu_bar * ring.n();
            let rhs = complex.generators[y].index + 1;
            if lhs != rhs {
                return Err(Error::DegreeViolation(format!(
                    "({} <- {}, mu_bar {}): |x| + mu_bar·N = {lhs} but |y| + 1 = {rhs}",
                    term.x, term.y, term.mu_bar
                )));
            }
            if ring.kind() == RingKind::Positive && term.mu_bar < 0 {
                return Err(Error::NegativeExponent(format!(
                    "({} <- {}) has mu_bar {} over the positive ring",
                    term.x, term.y, term.mu_bar
                )));
            }
            if check_count(term.count, "diff term")? {
                complex.differential.add_entry(y, x, &LaurentElement::monomial(term.mu_bar));
            }
        }
        if let Some(unit) = &data.unit {
            complex.unit_cochain(unit)?;
        }
        Ok(complex)
    }

    pub(crate) fn from_parts(
        name: &str,
        ring: RingSpec,
        generators: Vec<Generator>,
        differential: Option<SparseMap>,
    ) -> Result<Self, Error> {
        let mut lookup = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if lookup.insert(g.id.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.id.clone()));
            }
        }
        let n = generators.len();
        Ok(PearlComplex {
            name: name.to_string(),
            ring,
            generators,
            lookup,
            differential: differential.unwrap_or_else(|| SparseMap::zero(n, n)),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    /// Degree of the coefficient variable (N for t, 2 for q).
    pub fn n(&self) -> i64 {
        self.ring.n()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index(&self, g: usize) -> i64 {
        self.generators[g].index
    }

    pub fn id(&self, g: usize) -> &str {
        &self.generators[g].id
    }

    pub fn find(&self, id: &str) -> Result<usize, Error> {
        self.lookup.get(id).copied().ok_or_else(|| Error::UnknownGenerator(id.to_string()))
    }

    pub fn differential(&self) -> &SparseMap {
        &self.differential
    }

    pub fn monomial_degree(&self, g: usize, exponent: i64) -> i64 {
        self.index(g) + exponent * self.n()
    }

    /// Degree of a homogeneous cochain; `None` for zero, error for mixed degrees.
    pub fn degree_of(&self, c: &Cochain) -> Result<Option<i64>, Error> {
        let mut degree = None;
        for (g, e) in c.monomials() {
            let d = self.monomial_degree(g, e);
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::NotHomogeneous { expected: prev, detail: self.format(c) })
                }
                _ => {}
            }
        }
        Ok(degree)
    }

    /// The cochain `Σ id` for a list of generator ids, checked to sit in degree 0.
    pub fn unit_cochain(&self, ids: &[String]) -> Result<Cochain, Error> {
        let mut c = Cochain::zero();
        for id in ids {
            c.add_monomial(self.find(id)?, 0);
        }
        match self.degree_of(&c)? {
            None | Some(0) => Ok(c),
            Some(_) => Err(Error::NotHomogeneous { expected: 0, detail: self.format(&c) }),
        }
    }

    pub fn d(&self, c: &Cochain) -> Cochain {
        self.differential.apply(c)
    }

    pub fn is_cocycle(&self, c: &Cochain) -> bool {
        self.d(c).is_zero()
    }

    /// Nonzero entries of d∘d as `(source id, target id, coefficient)`.
    pub fn check_d_squared(&self) -> DSquaredVerdict {
        let dd = self.differential.compose(&self.differential);
        DSquaredVerdict {
            offending: dd
                .entries()
                .into_iter()
                .map(|(s, t, a)| (self.id(s).to_string(), self.id(t).to_string(), a))
                .collect(),
        }
    }

    pub fn require_d_squared_zero(&self) -> Result<(), Error> {
        let v = self.check_d_squared();
        if v.is_ok() {
            Ok(())
        } else {
            Err(Error::DSquaredNonZero(v.describe()))
        }
    }

    /// The same complex with coefficients pushed through t ↦ q^{N/2}.
    pub fn to_ambient(&self) -> Result<PearlComplex, Error> {
        let ring = RingSpec::ambient_of(self.ring)?;
        let n = self.ring.generator_degree();
        let differential = self.differential.map_coefficients(|a| a.to_ambient(n).expect("even N"));
        Self::from_parts(&self.name, ring, self.generators.clone(), Some(differential))
    }

    /// Renders a cochain as `x t^2 + y`, generators in basis order.
    pub fn format(&self, c: &Cochain) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        let var = self.ring.variable();
        c.terms()
            .flat_map(|(g, a)| {
                a.exponents()
                    .map(|e| match e {
                        0 => self.id(g).to_string(),
                        1 => format!("{} {var}", self.id(g)),
                        _ => format!("{} {var}^{e}", self.id(g)),
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Quantum cohomology over the Laurent (or ambient) ring, one period `[0, N)`.
    ///
    /// Computed on the Z/N-graded collapse; `QH^{k+N} ≅ QH^k`.
    pub fn cohomology(&self) -> Result<CohomologyTable, Error> {
        match self.ring.kind() {
            RingKind::Positive => Err(Error::WindowRequired),
            RingKind::Laurent | RingKind::Ambient => {
                self.require_d_squared_zero()?;
                Ok(self.collapse_to_periodic().cohomology(self))
            }
        }
    }

    /// Degreewise cohomology in an explicit window, with t-powers retained.
    ///
    /// Over the positive ring this is Q⁺H; over the Laurent ring it is an
    /// independent route to the periodic answer.
    pub fn cohomology_in_window(&self, window: Range<i64>) -> Result<CohomologyTable, Error> {
        self.require_d_squared_zero()?;
        let model = match self.ring.kind() {
            RingKind::Positive => Model::Positive,
            _ => Model::Laurent,
        };
        let view = View::new(self, model);
        let mut degrees = BTreeMap::new();
        for k in window {
            let h = view.cohomology(k);
            degrees.insert(
                k,
                DegreeEntry {
                    dim: h.dim(),
                    representatives: (0..h.dim()).map(|i| self.format(&h.representative(i))).collect(),
                },
            );
        }
        Ok(CohomologyTable { periodic: false, period: self.n(), degrees })
    }

    /// Positive-ring cohomology with the default window `[min index, max index + 2N]`.
    pub fn default_window(&self) -> Range<i64> {
        let lo = self.generators.iter().map(|g| g.index).min().unwrap_or(0);
        let hi = self.generators.iter().map(|g| g.index).max().unwrap_or(0);
        lo..hi + 2 * self.n() + 1
    }

    /// Regrades by index mod N and sets t = 1.
    pub fn collapse_to_periodic(&self) -> PeriodicComplex {
        let n = self.n();
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n as usize];
        let mut position = vec![0; self.len()];
        for (g, pos) in position.iter_mut().enumerate() {
            let k = self.index(g).rem_euclid(n) as usize;
            *pos = classes[k].len();
            classes[k].push(g);
        }
        let d = (0..n as usize)
            .map(|k| {
                let next = (k + 1) % n as usize;
                let mut m = BitMatrix::zeros(classes[next].len(), classes[k].len());
                for (col, &y) in classes[k].iter().enumerate() {
                    for (x, a) in self.differential.image(y).terms() {
                        if a.parity() {
                            m.flip(position[x], col);
                        }
                    }
                }
                m
            })
            .collect();
        PeriodicComplex { period: n, classes, d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSquaredVerdict {
    pub offending: Vec<(String, String, LaurentElement)>,
}

impl DSquaredVerdict {
    pub fn is_ok(&self) -> bool {
        self.offending.is_empty()
    }

    pub fn describe(&self) -> Vec<String> {
        self.offending.iter().map(|(s, t, a)| format!("d²({s}) ∋ {t}·({a})")).collect()
    }
}

/// A Z/N-graded Z2 complex: `classes[k]` lists the generators of index ≡ k mod N
/// and `d[k]` maps class k to class k+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicComplex {
    pub period: i64,
    pub classes: Vec<Vec<usize>>,
    pub d: Vec<BitMatrix>,
}

impl PeriodicComplex {
    fn incoming(&self, k: usize) -> &BitMatrix {
        let p = self.period as usize;
        &self.d[(k + p - 1) % p]
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.classes.len()).map(|k| self.classes[k].len() - self.d[k].rank() - self.incoming(k).rank()).collect()
    }

    pub fn d_squared_is_zero(&self) -> bool {
        let p = self.period as usize;
        (0..p).all(|k| self.d[(k + 1) % p].mul(&self.d[k]).is_zero())
    }

    fn cohomology(&self, complex: &PearlComplex) -> CohomologyTable {
        let mut degrees = BTreeMap::new();
        for (k, class) in self.classes.iter().enumerate() {
            let boundary = self.incoming(k);
            let cocycles = self.d[k].kernel();
            let mut echelon = TaggedEchelon::new(class.len(), 0);
            for j in 0..boundary.ncols() {
                echelon.insert(&boundary.column(j), &BitVec::zeros(0));
            }
            let mut reps = Vec::new();
            for z in cocycles {
                if echelon.insert(&z, &BitVec::zeros(0)) {
                    let degree = k as i64;
                    let c: Cochain = z
                        .ones()
                        .map(|i| {
                            let g = class[i];
                            (g, (degree - complex.index(g)).div_euclid(self.period))
                        })
                        .collect();
                    reps.push(complex.format(&c));
                }
            }
            degrees.insert(k as i64, DegreeEntry { dim: reps.len(), representatives: reps });
        }
        CohomologyTable { periodic: true, period: self.period, degrees }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub dim: usize,
    pub representatives: Vec<String>,
}

/// Cohomology dimensions per degree with chosen cocycle representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    /// True when degrees are classes mod `period`.
    pub periodic: bool,
    pub period: i64,
    pub degrees: BTreeMap<i64, DegreeEntry>,
}

impl CohomologyTable {
    /// Dimension in degree `k`, reducing mod the period for periodic tables.
    pub fn dim(&self, k: i64) -> usize {
        let key = if self.periodic { k.rem_euclid(self.period) } else { k };
        self.degrees.get(&key).map_or(0, |e| e.dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.values().map(|e| e.dim).collect()
    }

    pub fn total(&self) -> usize {
        self.degrees.values().map(|e| e.dim).sum()
    }
}
