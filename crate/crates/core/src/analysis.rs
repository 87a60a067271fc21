//! End-to-end pipeline over a dataset: builds every complex the data
//! determines and runs the structural checks and stated expectations.

use std::ops::Range;

use serde::Serialize;

use crate::chain::{Cochain, SparseMap};
use crate::dataset::{cochain_from_terms, DatasetFile, Expectations};
use crate::error::Error;
use crate::gf2::BitMatrix;
use crate::graded::{induced, Model, View};
use crate::gysin::{BundleComplex, EulerClass, GysinReport};
use crate::pearl::{CohomologyTable, PearlComplex};
use crate::positivity::{
    comparison_ladder, injectivity_window, sigma_is_chain_map, sigma_map, theta_ladder, theta_map,
};
use crate::quantum::{
    check_leibniz, check_lift_identities, delta_equals_mult_euler, lift_product, HomologyRing, Product,
};
use crate::ring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), ok, detail: detail.into() }
    }

    fn from_result(name: &str, r: Result<(bool, String), Error>) -> Self {
        match r {
            Ok((ok, detail)) => Check::new(name, ok, detail),
            Err(e) => Check::new(name, false, e.to_string()),
        }
    }
}

/// Relations between the Laurent bundle and its ambient variant.
#[derive(Debug, Clone)]
pub struct AmbientRelations {
    pub bundle: BundleComplex,
    /// `(k, δ_M = δ_W + q on H^k)`.
    pub delta: Vec<(i64, bool)>,
    pub euler: Option<EulerClass>,
    /// `e'_F = e_F + q·1` as classes.
    pub euler_matches: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub data: DatasetFile,
    pub bundle: BundleComplex,
    pub product: Option<Product>,
    pub unit: Option<Cochain>,
}

impl Analysis {
    pub fn new(data: DatasetFile) -> Result<Self, Error> {
        let ring = RingSpec::laurent(data.pearl.n)?;
        let bundle = BundleComplex::build(&data.pearl, data.twist_terms(), ring)?;
        let unit = data.unit_ids().map(|u| bundle.base().unit_cochain(u)).transpose()?;
        let product = data.product.as_ref().map(|p| Product::new(bundle.base(), p)).transpose()?.map(|p| match &unit {
            Some(u) => p.with_unit(u.clone()),
            None => p,
        });
        Ok(Analysis { data, bundle, product, unit })
    }

    pub fn base(&self) -> &PearlComplex {
        self.bundle.base()
    }

    pub fn n(&self) -> u32 {
        self.data.pearl.n
    }

    pub fn period(&self) -> Range<i64> {
        0..self.n() as i64
    }

    pub fn cohomology(&self) -> Result<CohomologyTable, Error> {
        self.base().cohomology()
    }

    pub fn euler_class(&self) -> Result<Option<EulerClass>, Error> {
        self.unit.as_ref().map(|u| self.bundle.euler_class(u, Model::Laurent)).transpose()
    }

    pub fn gysin(&self, window: Range<i64>) -> Result<GysinReport, Error> {
        self.bundle.long_exact_sequence(Model::Laurent, window)
    }

    pub fn classical(&self) -> Result<GysinReport, Error> {
        self.bundle.classical_gysin()
    }

    /// Ambient relations, or `None` for odd N.
    pub fn ambient(&self) -> Result<Option<AmbientRelations>, Error> {
        if self.n() % 2 == 1 {
            return Ok(None);
        }
        let bundle = self.bundle.ambient_variant()?;
        let base = bundle.base();
        let n = self.n();
        let lifted_twist = self.bundle.twist().map_coefficients(|a| a.to_ambient(n).expect("even N"));
        let without_q = BundleComplex::from_base(base.clone(), lifted_twist)?;
        let q = SparseMap::from_images(base.len(), (0..base.len()).map(|g| Cochain::monomial(g, 1)).collect());
        let view = View::new(base, Model::Laurent);
        let mut delta = Vec::new();
        for k in 0..2 {
            let dm = bundle.connecting_map(Model::Laurent, k)?.generic;
            let dw = without_q.connecting_map(Model::Laurent, k)?.generic;
            let (src, tgt) = (view.cohomology(k), view.cohomology(k + 2));
            let qm = induced(&src.piece().matrix_to(&q, tgt.piece()), &src, &tgt)?;
            delta.push((k, dm == dw.add(&qm)));
        }
        let (euler, euler_matches) = match &self.unit {
            Some(u) => {
                let em = bundle.euler_class(u, Model::Laurent)?;
                let ew = without_q.euler_class(u, Model::Laurent)?;
                let expected = view.cohomology(2).class_of(&ew.representative.sum(&u.shift(1)))?;
                let matches = expected == em.coordinates;
                (Some(em), Some(matches))
            }
            None => (None, None),
        };
        Ok(Some(AmbientRelations { bundle, delta, euler, euler_matches }))
    }

    /// The bundle over Λ⁺, or `None` when some count carries a negative exponent.
    pub fn positive(&self) -> Option<BundleComplex> {
        self.bundle.positive_variant().ok()
    }

    pub fn structural_checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let base = self.base();
        let period = self.period();
        let n = self.n() as i64;
        let d2 = base.check_d_squared();
        out.push(Check::new("d² = 0", d2.is_ok(), d2.describe().join("; ")));
        let dt2 = self.bundle.total().check_d_squared();
        out.push(Check::new("d̃² = 0", dt2.is_ok(), dt2.describe().join("; ")));
        let cm = self.bundle.chain_map_checks();
        out.push(Check::new(
            "i, p chain maps",
            cm.is_ok(),
            format!("d̃i = id: {}, dp = pd̃: {}, pi = 0: {}", cm.i_commutes, cm.p_commutes, cm.p_after_i_zero),
        ));
        let window = -n..2 * n + 2;
        let bad: Vec<i64> = self
            .bundle
            .chain_exactness(Model::Laurent, window)
            .into_iter()
            .filter(|c| !c.is_ok())
            .map(|c| c.degree)
            .collect();
        out.push(Check::new("im i = ker p", bad.is_empty(), format!("failing degrees {bad:?}")));
        out.push(Check::from_result(
            "Gysin sequence exact",
            self.gysin(period.clone()).map(|r| {
                let bad: Vec<i64> = r.rows.iter().filter(|row| !row.exact()).map(|row| row.k).collect();
                (bad.is_empty(), format!("failing rows {bad:?}"))
            }),
        ));
        out.push(Check::from_result(
            "snake = twist formula",
            (period.start..period.end)
                .map(|k| self.bundle.connecting_map(Model::Laurent, k).map(|c| (k, c.agree())))
                .collect::<Result<Vec<_>, _>>()
                .map(|v| {
                    let bad: Vec<i64> = v.iter().filter(|(_, ok)| !ok).map(|(k, _)| *k).collect();
                    (bad.is_empty(), format!("disagreeing degrees {bad:?}"))
                }),
        ));
        out.push(Check::from_result(
            "collapse = window",
            self.cohomology().and_then(|t| {
                let w = base.cohomology_in_window(-n..2 * n)?;
                let ok = (-n..2 * n).all(|k| t.dim(k) == w.dim(k));
                Ok((ok, format!("periodic {:?}", t.dims())))
            }),
        ));
        let collapsed = base.collapse_to_periodic();
        let balance = euler_balance(&collapsed);
        out.push(Check::new("Euler characteristic balance", balance, ""));
        out.push(Check::from_result(
            "classical Gysin exact",
            self.classical().map(|r| (r.all_exact(), format!("H(Γ) {:?}", r.gamma_dims))),
        ));
        if let Some(product) = &self.product {
            out.extend(self.product_checks(product));
        }
        match self.ambient() {
            Ok(Some(a)) => {
                let ok = a.delta.iter().all(|(_, ok)| *ok);
                out.push(Check::new("δ_M = δ_W + q", ok, format!("{:?}", a.delta)));
                if let Some(m) = a.euler_matches {
                    out.push(Check::new("e'_F = e_F + q", m, a.euler.map(|e| e.display).unwrap_or_default()));
                }
            }
            Ok(None) => {}
            Err(e) => out.push(Check::new("ambient variant", false, e.to_string())),
        }
        if let Some(pos) = self.positive() {
            out.extend(self.positive_checks(&pos));
        }
        out
    }

    fn product_checks(&self, product: &Product) -> Vec<Check> {
        let base = self.base();
        let mut out = Vec::new();
        let offending = check_leibniz(base, product);
        out.push(Check::new("Leibniz", offending.is_empty(), format!("{offending:?}")));
        if !offending.is_empty() {
            return out;
        }
        let ring = HomologyRing::new(base, product, Model::Laurent);
        out.push(Check::from_result(
            "associative, unital",
            ring.check(self.period()).map(|v| (v.is_ok(), v.failures.join("; "))),
        ));
        let lifted_data = lift_product(self.data.product.as_ref().expect("product data"));
        out.push(Check::from_result(
            "lifted product identities",
            Product::new(self.bundle.total(), &lifted_data).map(|lifted| {
                let v = check_lift_identities(&self.bundle, product, &lifted);
                let leibniz = check_leibniz(self.bundle.total(), &lifted);
                (
                    v.is_ok() && leibniz.is_empty(),
                    format!(
                        "i: {:?}, p right: {:?}, p left: {:?}, Leibniz: {leibniz:?}",
                        v.i_multiplicative, v.p_right, v.p_left
                    ),
                )
            }),
        ));
        if self.unit.is_some() {
            out.push(Check::from_result(
                "δ = e_F multiplication",
                delta_equals_mult_euler(&self.bundle, product, Model::Laurent, self.period())
                    .map(|v| (v.is_ok(), v.failures.join("; "))),
            ));
        }
        out
    }

    fn positive_checks(&self, pos: &BundleComplex) -> Vec<Check> {
        let mut out = Vec::new();
        let window = pos.base().default_window();
        let wide = window.start - 1..window.end + 1;
        let sigma_ok = sigma_is_chain_map(pos.base(), wide.clone()) && sigma_is_chain_map(pos.total(), wide);
        out.push(Check::new("σ̃ chain map", sigma_ok, ""));
        out.push(Check::from_result(
            "σ ladder commutes",
            comparison_ladder(pos, window.clone()).map(|l| (l.commutes(), String::new())),
        ));
        out.push(Check::from_result(
            "θ ladder commutes",
            theta_ladder(pos, window).map(|l| (l.commutes(), String::new())),
        ));
        out.push(Check::from_result(
            "σ injective below N",
            injectivity_window(pos.base())
                .map(|v| (v.injective() && v.pair_sequence_exact, format!("kernels {:?}", v.kernels))),
        ));
        if let Some(u) = &self.unit {
            out.push(Check::from_result("θ(e_F⁺) = e_F, σ(e_F⁺) = e", self.euler_comparison(pos, u)));
        }
        out
    }

    fn euler_comparison(&self, pos: &BundleComplex, unit: &Cochain) -> Result<(bool, String), Error> {
        let plus = pos.euler_class(unit, Model::Positive)?;
        let laurent = self.bundle.euler_class(unit, Model::Laurent)?;
        let classical = pos.euler_class(unit, Model::Classical)?;
        let theta = theta_map(pos.base(), 2)?.mul_vec(&plus.coordinates);
        let sigma = sigma_map(pos.base(), 2)?.mul_vec(&plus.coordinates);
        Ok((
            theta == laurent.coordinates && sigma == classical.coordinates,
            format!("e_F⁺ = {}, e = {}", plus.display, pos.base().format(&classical.representative)),
        ))
    }

    pub fn expectation_checks(&self) -> Vec<Check> {
        let Some(exp) = &self.data.expectations else {
            return Vec::new();
        };
        let mut out = Vec::new();
        self.expect_dims(exp, &mut out);
        if let Some(expected) = &exp.euler_class {
            out.push(Check::from_result("expected e_F", self.compare_euler(expected, false)));
        }
        if let Some(expected) = &exp.ambient_euler_class {
            out.push(Check::from_result("expected e'_F", self.compare_euler(expected, true)));
        }
        if let Some(hint) = &self.data.pearl.betti_hint {
            let view = View::new(self.base(), Model::Classical);
            let got: Vec<usize> = (0..hint.len() as i64).map(|k| view.cohomology(k).dim()).collect();
            out.push(Check::new("expected Betti numbers", &got == hint, format!("got {got:?}, expected {hint:?}")));
        }
        out
    }

    fn expect_dims(&self, exp: &Expectations, out: &mut Vec<Check>) {
        if let Some(expected) = &exp.cohomology_dims {
            out.push(Check::from_result(
                "expected QH(L)",
                self.cohomology().map(|t| {
                    let got = t.dims();
                    (&got == expected, format!("got {got:?}, expected {expected:?}"))
                }),
            ));
        }
        if exp.gamma_dims.is_some() || exp.expect_gamma_vanishes.is_some() {
            match self.gysin(self.period()) {
                Ok(r) => {
                    let got: Vec<usize> = r.gamma_dims.iter().map(|&(_, d)| d).collect();
                    if let Some(expected) = &exp.gamma_dims {
                        out.push(Check::new(
                            "expected QH(Γ)",
                            &got == expected,
                            format!("got {got:?}, expected {expected:?}"),
                        ));
                    }
                    if let Some(v) = exp.expect_gamma_vanishes {
                        out.push(Check::new("expected QH(Γ) = 0", r.gamma_vanishes() == v, format!("got {got:?}")));
                    }
                }
                Err(e) => out.push(Check::new("expected QH(Γ)", false, e.to_string())),
            }
        }
        if let Some(expected) = &exp.classical_gamma_dims {
            out.push(Check::from_result(
                "expected H(Γ)",
                self.classical().map(|r| {
                    let got: Vec<usize> = r.gamma_dims.iter().map(|&(_, d)| d).collect();
                    (&got == expected, format!("got {got:?}, expected {expected:?}"))
                }),
            ));
        }
    }

    fn compare_euler(&self, expected: &[crate::dataset::ClassTerm], ambient: bool) -> Result<(bool, String), Error> {
        let unit = self.unit.as_ref().ok_or(Error::MissingUnit)?;
        let (bundle, owned);
        if ambient {
            owned = self.ambient()?.ok_or_else(|| Error::OddMaslov(self.n()))?.bundle;
            bundle = &owned;
        } else {
            bundle = &self.bundle;
        }
        let e = bundle.euler_class(unit, Model::Laurent)?;
        let want = cochain_from_terms(bundle.base(), expected)?;
        let want_class = View::new(bundle.base(), Model::Laurent).cohomology(2).class_of(&want)?;
        Ok((want_class == e.coordinates, format!("got {}, expected {}", e.display, bundle.base().format(&want))))
    }
}

/// Alternating-sum balance of chain and cohomology dimensions on the collapse.
pub fn euler_balance(c: &crate::pearl::PeriodicComplex) -> bool {
    let chain: Vec<usize> = c.classes.iter().map(Vec::len).collect();
    let homology = c.dims();
    if c.period % 2 == 0 {
        let alt = |v: &[usize]| {
            v.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum::<i64>()
        };
        alt(&chain) == alt(&homology)
    } else {
        let ranks: usize = c.d.iter().map(BitMatrix::rank).sum();
        chain.iter().sum::<usize>() - 2 * ranks == homology.iter().sum::<usize>()
    }
}
