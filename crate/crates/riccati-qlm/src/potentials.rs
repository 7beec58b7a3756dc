//! Catalog of potential models.
//!
//! Everything downstream works in the scaled coordinate `z = λ r` with
//! `λ = √(2m)/ħ`, where the radial equation reads `χ'' + k²(z) χ = 0` and
//! `k² = E − V − l(l+1)/z²`. The one exception is the modified Coulomb
//! model, which is posed directly in its own dimensionless coordinate ρ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::numkernel::{root_find, Jet, JetError, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("point r = {0} is outside the model domain")]
    DomainViolation(f64),
    #[error("expected two simple turning points, found {0} sign changes of k²")]
    WrongTurningStructure(usize),
    #[error("energy {0} is not below the continuum threshold")]
    NotBound(f64),
    #[error("state n = {0} is not bound")]
    NoBoundState(usize),
    #[error("unknown potential `{0}`")]
    UnknownModel(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Quartic,
    Harmonic,
    Coulomb,
    Hulthen,
    Morse,
    PoschlTeller,
    Eckart,
    ModifiedCoulombDirac,
}

impl ModelId {
    pub const ALL: [ModelId; 8] = [
        ModelId::Quartic,
        ModelId::Harmonic,
        ModelId::Coulomb,
        ModelId::Hulthen,
        ModelId::Morse,
        ModelId::PoschlTeller,
        ModelId::Eckart,
        ModelId::ModifiedCoulombDirac,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Quartic => "quartic",
            ModelId::Harmonic => "harmonic",
            ModelId::Coulomb => "coulomb",
            ModelId::Hulthen => "hulthen",
            ModelId::Morse => "morse",
            ModelId::PoschlTeller => "poschl_teller",
            ModelId::Eckart => "eckart",
            ModelId::ModifiedCoulombDirac => "modified_coulomb_dirac",
        }
    }

    /// Parameter names with their default values.
    pub fn default_params(self) -> &'static [(&'static str, &'static str)] {
        match self {
            ModelId::Quartic => &[("c", "1")],
            ModelId::Harmonic => &[("c", "1")],
            ModelId::Coulomb => &[("Z", "1")],
            ModelId::Hulthen => &[("A", "4"), ("a", "1")],
            ModelId::Morse => &[("D", "12"), ("alpha", "1"), ("re", "0")],
            ModelId::PoschlTeller => &[("V0", "15"), ("a", "1")],
            ModelId::Eckart => &[("V1", "1"), ("V2", "20"), ("a", "1")],
            ModelId::ModifiedCoulombDirac => &[("alpha", "0.0072973525693")],
        }
    }

    /// Default `(m, ħ)`.
    pub fn default_units(self) -> (&'static str, &'static str) {
        match self {
            ModelId::Quartic => ("1", "1"),
            _ => ("0.5", "1"),
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            ModelId::Harmonic | ModelId::Morse | ModelId::PoschlTeller | ModelId::Eckart => {
                Domain::FullLine
            }
            _ => Domain::HalfLine,
        }
    }
}

impl FromStr for ModelId {
    type Err = PotentialError;
    fn from_str(s: &str) -> Result<ModelId, PotentialError> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| PotentialError::UnknownModel(s.to_string()))
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    HalfLine,
    FullLine,
}

/// Centrifugal coefficient used in `k²`: `l(l+1)` or Langer's `(l+½)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KForm {
    Plain,
    Langer,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitScales {
    pub m: Real,
    pub hbar: Real,
    pub lambda: Real,
    pub g: Real,
}

impl UnitScales {
    pub fn new(m: Real, hbar: Real) -> UnitScales {
        let lambda = (m * 2.0).sqrt() / hbar;
        UnitScales { m, hbar, lambda, g: lambda.recip() }
    }

    /// Unit scaling `z = r`, used by models posed in their own coordinate.
    pub fn identity() -> UnitScales {
        UnitScales::new(Real::HALF, Real::ONE)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialModel {
    pub id: ModelId,
    pub params: BTreeMap<String, Real>,
    pub units: UnitScales,
    pub domain: Domain,
    pub l: u32,
    pub energy_dependent: bool,
}

/// Serializable description consumed by the command line front end.
#[derive(Clone, Debug, Default, PartialEq, serde::Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub id: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub l: u32,
    #[serde(default)]
    pub units: Option<UnitSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, serde::Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSpec {
    pub m: Option<String>,
    pub hbar: Option<String>,
}

fn parse_real(name: &str, v: &str) -> Result<Real, PotentialError> {
    v.parse::<Real>()
        .map_err(|_| PotentialError::BadParameter(format!("{name} = `{v}` is not a decimal number")))
}

impl PotentialModel {
    /// Model with default parameters and units.
    pub fn new(id: ModelId) -> PotentialModel {
        PotentialModel::with_params(id, &[], 0).expect("defaults are valid")
    }

    /// Model with some parameters overridden (decimal strings).
    pub fn with_params(
        id: ModelId,
        overrides: &[(&str, &str)],
        l: u32,
    ) -> Result<PotentialModel, PotentialError> {
        let spec = PotentialSpec {
            id: id.name().to_string(),
            params: overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            l,
            units: None,
        };
        PotentialModel::from_spec(&spec)
    }

    pub fn from_spec(spec: &PotentialSpec) -> Result<PotentialModel, PotentialError> {
        let id: ModelId = spec.id.parse()?;
        let mut params = BTreeMap::new();
        for (k, v) in id.default_params() {
            params.insert(k.to_string(), parse_real(k, v)?);
        }
        for (k, v) in &spec.params {
            if !params.contains_key(k) {
                return Err(PotentialError::BadParameter(format!(
                    "`{k}` is not a parameter of {id}"
                )));
            }
            params.insert(k.clone(), parse_real(k, v)?);
        }
        let (dm, dh) = id.default_units();
        let (m, hbar) = match &spec.units {
            Some(u) => (
                parse_real("m", u.m.as_deref().unwrap_or(dm))?,
                parse_real("hbar", u.hbar.as_deref().unwrap_or(dh))?,
            ),
            None => (parse_real("m", dm)?, parse_real("hbar", dh)?),
        };
        if m <= Real::ZERO || hbar <= Real::ZERO {
            return Err(PotentialError::BadParameter("m and hbar must be positive".into()));
        }
        let domain = id.domain();
        if domain == Domain::FullLine && spec.l != 0 {
            return Err(PotentialError::BadParameter(format!(
                "{id} lives on the full line; l must be 0"
            )));
        }
        let units = if id == ModelId::ModifiedCoulombDirac {
            UnitScales::identity()
        } else {
            UnitScales::new(m, hbar)
        };
        let model = PotentialModel {
            id,
            params,
            units,
            domain,
            l: spec.l,
            energy_dependent: id == ModelId::ModifiedCoulombDirac,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), PotentialError> {
        let positive: &[&str] = match self.id {
            ModelId::Quartic | ModelId::Harmonic => &["c"],
            ModelId::Coulomb => &["Z"],
            ModelId::Hulthen => &["A", "a"],
            ModelId::Morse => &["D", "alpha"],
            ModelId::PoschlTeller => &["V0", "a"],
            ModelId::Eckart => &["a"],
            ModelId::ModifiedCoulombDirac => &["alpha"],
        };
        for p in positive {
            if self.p(p) <= Real::ZERO {
                return Err(PotentialError::BadParameter(format!("{p} must be positive")));
            }
        }
        Ok(())
    }

    pub fn p(&self, name: &str) -> Real {
        self.params[name]
    }

    pub fn lambda(&self) -> Real {
        self.units.lambda
    }

    /// Converts a radius to the scaled coordinate.
    pub fn z_of_r(&self, r: Real) -> Real {
        r * self.units.lambda
    }

    pub fn r_of_z(&self, z: Real) -> Real {
        z * self.units.g
    }

    /// The constant playing the role of E in `k²`. For the modified Coulomb
    /// model this is `ε(E) = (E² − 1)/(4α²E²)`.
    pub fn eig_param(&self, e: Real) -> Real {
        match self.id {
            ModelId::ModifiedCoulombDirac => {
                let a = self.p("alpha");
                ((e - 1.0) * (e + 1.0)) / (a.sqr() * e.sqr() * 4.0)
            }
            _ => e,
        }
    }

    /// Inverse of [`PotentialModel::eig_param`].
    pub fn energy_of_eig(&self, eps: Real) -> Real {
        match self.id {
            ModelId::ModifiedCoulombDirac => {
                let a = self.p("alpha");
                (Real::ONE - a.sqr() * eps * 4.0).sqrt().recip()
            }
            _ => eps,
        }
    }

    /// Continuum threshold energy (infinite for confining models).
    pub fn threshold(&self) -> Real {
        match self.id {
            ModelId::Quartic | ModelId::Harmonic => Real::INFINITY,
            ModelId::Eckart => self.p("V1").min(Real::ZERO),
            ModelId::ModifiedCoulombDirac => Real::ONE,
            _ => Real::ZERO,
        }
    }

    pub fn is_confining(&self) -> bool {
        !self.threshold().is_finite()
    }

    /// The model expression applied to a jet in `r`, without the generic
    /// centrifugal term.
    fn v_expr(&self, x: &Jet<Real>) -> Result<Jet<Real>, PotentialError> {
        let r0 = x.value();
        if self.domain == Domain::HalfLine && r0 <= Real::ZERO {
            return Err(PotentialError::DomainViolation(r0.to_f64()));
        }
        Ok(match self.id {
            ModelId::Quartic => x.powi(4).scale(self.p("c")),
            ModelId::Harmonic => x.powi(2).scale(self.p("c")),
            ModelId::Coulomb => x.recip()?.scale(-self.p("Z")),
            ModelId::Hulthen => {
                let a = self.p("a");
                let t = x.scale(-a.recip()).exp();
                // 1 − t with its constant term free of cancellation near 0.
                let mut u = -&t;
                u.coeffs[0] = -(-(r0 / a)).exp_m1();
                t.div(&u)?.scale(-self.p("A"))
            }
            ModelId::Morse => {
                let al = self.p("alpha");
                let s = x.add_scalar(-self.p("re")).scale(-al);
                let e1 = s.exp();
                let e2 = s.scale(Real::TWO).exp();
                (&e2 - &e1.scale(Real::TWO)).scale(self.p("D"))
            }
            ModelId::PoschlTeller => {
                // sech²u = 4 e^{−2|u|} / (1 + e^{−2|u|})²
                let a = self.p("a");
                let sgn = if r0.is_sign_negative() { Real::ONE } else { -Real::ONE };
                let q = x.scale(sgn * 2.0 / a).exp();
                let den = q.add_scalar(Real::ONE).powi(2);
                q.scale(Real::from_f64(4.0)).div(&den)?.scale(-self.p("V0"))
            }
            ModelId::Eckart => {
                // σ = 1/(1 + e^{−u}); V = V1 σ − V2 σ(1 − σ)
                let a = self.p("a");
                let sigma = if r0.is_sign_negative() {
                    let q = x.scale(a.recip()).exp();
                    q.div(&q.add_scalar(Real::ONE))?
                } else {
                    let q = x.scale(-a.recip()).exp();
                    q.add_scalar(Real::ONE).recip()?
                };
                let one_minus = (-&sigma).add_scalar(Real::ONE);
                let bump = &sigma * &one_minus;
                &sigma.scale(self.p("V1")) - &bump.scale(self.p("V2"))
            }
            ModelId::ModifiedCoulombDirac => {
                let al = self.p("alpha");
                let a2 = al.sqr();
                let inv = x.recip()?;
                let inv2 = &inv * &inv;
                let l = Real::from_f64(self.l as f64);
                let cent = l * (l + 1.0) - a2 * 0.25;
                let shifted = x.add_scalar(a2).recip()?;
                let core = &inv2 * &(&shifted * &shifted);
                let mut v = inv.scale(-Real::HALF);
                v = &v + &inv2.scale(cent);
                &v + &core.scale(a2 * 0.75)
            }
        })
    }

    fn centrifugal_in_v(&self) -> bool {
        self.domain == Domain::HalfLine && self.id != ModelId::ModifiedCoulombDirac
    }

    /// Taylor jet in `r` of the effective potential (centrifugal term
    /// included for half-line models), energy units.
    pub fn v_jet(&self, e: Real, r: Real, order: usize) -> Result<Jet<Real>, PotentialError> {
        let _ = e;
        let x = Jet::<Real>::variable(r, order);
        let mut v = self.v_expr(&x)?;
        if self.centrifugal_in_v() && self.l > 0 {
            let l = Real::from_f64(self.l as f64);
            let inv = x.recip()?;
            let c = l * (l + 1.0) / self.units.lambda.sqr();
            v = &v + &(&inv * &inv).scale(c);
        }
        Ok(v)
    }

    /// Plain `k²` for an arbitrary jet in `z`, e.g. `z = z₀ e^τ`.
    pub fn k2_of_jet(&self, e: Real, z: &Jet<Real>) -> Result<Jet<Real>, PotentialError> {
        let r = z.scale(self.units.g);
        let mut v = self.v_expr(&r)?;
        if self.centrifugal_in_v() && self.l > 0 {
            let l = Real::from_f64(self.l as f64);
            let inv = r.recip()?;
            let c = l * (l + 1.0) / self.units.lambda.sqr();
            v = &v + &(&inv * &inv).scale(c);
        }
        Ok((-&v).add_scalar(self.eig_param(e)))
    }

    pub fn v_eval(&self, e: Real, r: Real) -> Result<Real, PotentialError> {
        Ok(self.v_jet(e, r, 0)?.value())
    }

    /// `k² = E − V − l(l+1)/z²` at radius `r`, in z-units.
    pub fn k_squared(&self, e: Real, r: Real) -> Result<Real, PotentialError> {
        Ok(self.eig_param(e) - self.v_eval(e, r)?)
    }

    /// `k²` at scaled position `z` in the requested form.
    pub fn k2_at_z(&self, e: Real, z: Real, form: KForm) -> Result<Real, PotentialError> {
        Ok(self.k2_jet_z(e, z, 0, form)?[0])
    }

    /// Taylor coefficients of `k²` in `z` about `z0`.
    pub fn k2_jet_z(
        &self,
        e: Real,
        z0: Real,
        order: usize,
        form: KForm,
    ) -> Result<Vec<Real>, PotentialError> {
        let r0 = self.r_of_z(z0);
        let v = self.v_jet(e, r0, order)?;
        let g = self.units.g;
        let mut out = Vec::with_capacity(order + 1);
        let mut gp = Real::ONE;
        for c in &v.coeffs {
            out.push(-(*c * gp));
            gp *= g;
        }
        out[0] += self.eig_param(e);
        if form == KForm::Langer && self.domain == Domain::HalfLine {
            // (l+½)² − l(l+1) = ¼
            let inv = Jet::<Real>::variable(z0, order).recip()?;
            let q = &inv * &inv;
            for (o, c) in out.iter_mut().zip(&q.coeffs) {
                *o -= *c * 0.25;
            }
        }
        Ok(out)
    }

    /// Taylor order usable about `z` without overflowing: on the half-line
    /// coefficients grow like `z^{-j}` near the origin.
    pub fn order_at(&self, z: Real, order: usize) -> usize {
        if self.domain != Domain::HalfLine {
            return order;
        }
        let l = -z.abs().to_f64().log10();
        if l <= 1.0 {
            return order;
        }
        order.min(((250.0 / l) as usize).saturating_sub(2).max(8))
    }

    /// Scaled length of order one for this model, used to seed searches.
    pub fn z_scale(&self) -> Real {
        let lam = self.units.lambda;
        match self.id {
            ModelId::Coulomb => lam.sqr().recip() / self.p("Z") * lam,
            ModelId::Hulthen | ModelId::PoschlTeller | ModelId::Eckart => self.p("a") * lam,
            ModelId::Morse => self.p("alpha").recip() * lam,
            ModelId::ModifiedCoulombDirac => Real::ONE,
            _ => Real::ONE,
        }
    }

    /// Closed-form bound-state energy where one is known.
    pub fn reference_energy(&self, n: usize) -> Result<Option<Real>, PotentialError> {
        let nn = Real::from_f64(n as f64);
        let lam = self.units.lambda;
        match self.id {
            ModelId::Harmonic => {
                let omega = (self.p("c") * 2.0 / self.units.m).sqrt();
                Ok(Some(self.units.hbar * omega * (nn + 0.5)))
            }
            ModelId::Coulomb => {
                let big_n = nn + (self.l as f64) + 1.0;
                let z = self.p("Z");
                Ok(Some(-(self.units.m * z.sqr()) / (self.units.hbar.sqr() * big_n.sqr() * 2.0)))
            }
            ModelId::Hulthen => {
                if self.l != 0 {
                    return Ok(None);
                }
                hulthen_energy(self.p("a"), self.p("A"), n, &self.units).map(Some)
            }
            ModelId::Morse => {
                let al = self.p("alpha");
                let nu = lam * self.p("D").sqrt() / al;
                let x = nu - nn - 0.5;
                if x <= Real::ZERO {
                    return Err(PotentialError::NoBoundState(n));
                }
                Ok(Some(-(al.sqr() / lam.sqr()) * x.sqr()))
            }
            ModelId::PoschlTeller => {
                let a = self.p("a");
                let q = lam.sqr() * self.p("V0") * a.sqr();
                let s = ((Real::ONE + q * 4.0).sqrt() - 1.0) * 0.5;
                let x = s - nn;
                if x <= Real::ZERO {
                    return Err(PotentialError::NoBoundState(n));
                }
                Ok(Some(-(x.sqr()) / (lam.sqr() * a.sqr())))
            }
            ModelId::Quartic | ModelId::Eckart | ModelId::ModifiedCoulombDirac => Ok(None),
        }
    }

    /// Points where `k²` (in the given form) changes sign, in z-units.
    pub fn sign_changes(&self, e: Real, form: KForm) -> Result<Vec<Real>, PotentialError> {
        let s = self.z_scale();
        let k2 = |z: Real| self.k2_at_z(e, z, form);
        let far = |dir: f64| -> Result<Real, PotentialError> {
            let mut z = s * dir;
            for _ in 0..200 {
                if k2(z)? < Real::ZERO && k2(z * 2.0)? < Real::ZERO && k2(z * 4.0)? < Real::ZERO {
                    return Ok(z * 4.0);
                }
                z = z * 2.0;
            }
            Err(PotentialError::NotBound(e.to_f64()))
        };
        let hi = far(1.0)?;
        let mut grid: Vec<Real> = Vec::new();
        let n = 3000;
        match self.domain {
            Domain::HalfLine => {
                let lo = s * 1e-9;
                let ratio = (hi / lo).ln() / (n as f64);
                for i in 0..=n {
                    grid.push(lo * (ratio * (i as f64)).exp());
                }
            }
            Domain::FullLine => {
                let lo = far(-1.0)?;
                // Dense near the centre, geometric outward on both sides.
                let m = n / 2;
                let inner = s * 1e-3;
                let mut left = Vec::new();
                let rl = (-lo / inner).ln() / (m as f64);
                for i in (0..=m).rev() {
                    left.push(-(inner * (rl * (i as f64)).exp()));
                }
                grid.extend(left);
                let steps = 200;
                for i in 1..steps {
                    grid.push(-inner + inner * 2.0 * (i as f64) / (steps as f64));
                }
                let rr = (hi / inner).ln() / (m as f64);
                for i in 0..=m {
                    grid.push(inner * (rr * (i as f64)).exp());
                }
            }
        }
        let mut roots = Vec::new();
        let mut prev_z = grid[0];
        let mut prev_v = k2(prev_z)?;
        for &z in &grid[1..] {
            let v = k2(z)?;
            if v.is_zero() || (v.is_sign_negative() != prev_v.is_sign_negative()) {
                let tol = (z.abs() + Real::ONE) * Real::pow10(-58);
                let root = root_find(
                    |x| k2(x).unwrap_or(Real::NAN),
                    prev_z,
                    z,
                    tol,
                )
                .map(|r| r.x)
                .unwrap_or(z);
                if !v.is_zero() || roots.last() != Some(&z) {
                    roots.push(root);
                }
            }
            prev_z = z;
            prev_v = v;
        }
        Ok(roots)
    }

    /// The two turning points `(a, b)` in z-units. For the plain form on a
    /// half line with `k² > 0` down to the origin, `a = 0`.
    pub fn turning_points(&self, e: Real, form: KForm) -> Result<(Real, Real), PotentialError> {
        if e >= self.threshold() {
            return Err(PotentialError::NotBound(e.to_f64()));
        }
        let roots = self.sign_changes(e, form)?;
        match (self.domain, roots.len()) {
            (_, 2) => Ok((roots[0], roots[1])),
            (Domain::HalfLine, 1) => {
                let probe = self.z_scale() * 1e-9;
                if self.k2_at_z(e, probe, form)? > Real::ZERO {
                    Ok((Real::ZERO, roots[0]))
                } else {
                    Err(PotentialError::WrongTurningStructure(1))
                }
            }
            (_, k) => Err(PotentialError::WrongTurningStructure(k)),
        }
    }

    /// Lowest value of `eig − k²` (the effective well bottom, in eigenvalue
    /// units) found on a scan grid, with its location.
    pub fn well_bottom(&self, form: KForm) -> Result<(Real, Real), PotentialError> {
        let e = self.energy_of_eig(Real::ZERO);
        let u = |z: Real| -> Result<Real, PotentialError> { Ok(-self.k2_at_z(e, z, form)?) };
        let s = self.z_scale();
        let pts: Vec<Real> = match self.domain {
            Domain::HalfLine => (0..=600).map(|i| s * (10f64).powf(-6.0 + 9.0 * i as f64 / 600.0)).collect(),
            Domain::FullLine => (0..=1200).map(|i| s * (-60.0 + 0.1 * i as f64)).collect(),
        };
        let mut best = (pts[0], u(pts[0])?);
        let mut idx = 0;
        for (i, &z) in pts.iter().enumerate() {
            let v = u(z)?;
            if v < best.1 {
                best = (z, v);
                idx = i;
            }
        }
        if idx == 0 || idx == pts.len() - 1 {
            return Ok(best);
        }
        // Golden-section polish between the grid neighbours.
        let (mut lo, mut hi) = (pts[idx - 1], pts[idx + 1]);
        let g = Real::from_f64(0.381_966_011_250_105_1);
        for _ in 0..120 {
            let m1 = lo + (hi - lo) * g;
            let m2 = hi - (hi - lo) * g;
            if u(m1)? < u(m2)? {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let z = (lo + hi) * 0.5;
        Ok((z, u(z)?))
    }

    /// Right integration start: the point beyond the outer turning point where
    /// the decaying solution has fallen by `tail_tol`, i.e.
    /// `∫_b^{z0} |k| dz ≥ ln(1/tail_tol)`.
    pub fn asymptotic_start(&self, e: Real, tail_tol: Real, form: KForm) -> Result<Real, PotentialError> {
        let (_, b) = self.turning_points(e, form)?;
        self.action_point(e, b, tail_tol, 1.0, form)
    }

    /// Mirror of [`PotentialModel::asymptotic_start`] on the left of a
    /// full-line model.
    pub fn asymptotic_start_left(
        &self,
        e: Real,
        tail_tol: Real,
        form: KForm,
    ) -> Result<Real, PotentialError> {
        let (a, _) = self.turning_points(e, form)?;
        self.action_point(e, a, tail_tol, -1.0, form)
    }

    /// Walks from `from` in direction `dir` until the accumulated action of
    /// `|k|` reaches `ln(1/tail_tol)`. The integral only needs a few digits.
    pub fn action_point(
        &self,
        e: Real,
        from: Real,
        tail_tol: Real,
        dir: f64,
        form: KForm,
    ) -> Result<Real, PotentialError> {
        let target = -tail_tol.to_f64().ln();
        if target <= 0.0 {
            return Ok(from);
        }
        let absk = |z: f64| -> Result<f64, PotentialError> {
            if self.domain == Domain::HalfLine && z <= 0.0 {
                return Err(PotentialError::DomainViolation(z));
            }
            Ok(self.k2_at_z(e, Real::from_f64(z), form)?.to_f64().abs().sqrt())
        };
        let s = self.z_scale().to_f64();
        let mut z = from.to_f64();
        let mut acc = 0.0;
        for _ in 0..100_000 {
            let mut h = 0.02 * z.abs().max(s);
            if self.domain == Domain::HalfLine && dir < 0.0 {
                h = h.min(0.25 * z);
            }
            let h = h * dir;
            let (f0, f1, f2) = (absk(z)?, absk(z + 0.5 * h)?, absk(z + h)?);
            let inc = (f0 + 4.0 * f1 + f2) * h.abs() / 6.0;
            if acc + inc >= target {
                // Linear interpolation inside the last step is plenty.
                let frac = ((target - acc) / inc).clamp(0.0, 1.0);
                return Ok(Real::from_f64(z + frac * h));
            }
            acc += inc;
            z += h;
        }
        Err(PotentialError::NotBound(e.to_f64()))
    }
}

/// Exact s-wave Hulthen energy from the closed-form quantization relation
/// `s(√(ε + A) − √ε) = n + 1` with `s = λa`: `√ε = (A s² − u²)/(2us)`,
/// `u = n + 1`, `E = −ε`.
pub fn hulthen_energy(a: Real, big_a: Real, n: usize, units: &UnitScales) -> Result<Real, PotentialError> {
    let s = units.lambda * a;
    let u = Real::from_f64((n + 1) as f64);
    let num = big_a * s.sqr() - u.sqr();
    if num <= Real::ZERO {
        return Err(PotentialError::NoBoundState(n));
    }
    let root_eps = num / (u * s * 2.0);
    Ok(-root_eps.sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Real {
        s.parse().unwrap()
    }

    fn close(a: Real, b: Real, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol
    }

    #[test]
    fn quartic_k_squared() {
        let m = PotentialModel::new(ModelId::Quartic);
        let e = p("2.3936440164823031156");
        assert!(close(m.k_squared(e, Real::ONE).unwrap(), e - 1.0, 1e-60));
        assert!(matches!(
            m.k_squared(e, -Real::ONE),
            Err(PotentialError::DomainViolation(_))
        ));
    }

    #[test]
    fn harmonic_turning_point_at_unit_energy() {
        let m = PotentialModel::new(ModelId::Harmonic);
        assert!(close(m.k_squared(Real::ONE, Real::ONE).unwrap(), Real::ZERO, 1e-60));
        let (a, b) = m.turning_points(Real::from_f64(9.0), KForm::Plain).unwrap();
        assert!(close(a, Real::from_f64(-3.0), 1e-50));
        assert!(close(b, Real::from_f64(3.0), 1e-50));
        assert!(matches!(
            m.turning_points(-Real::ONE, KForm::Plain),
            Err(PotentialError::WrongTurningStructure(0))
        ));
    }

    #[test]
    fn hulthen_k_squared_at_half() {
        let m = PotentialModel::new(ModelId::Hulthen);
        let r = Real::LN2;
        let k2 = m.k_squared(p("-2.25"), r).unwrap();
        assert!(close(k2, p("1.75"), 1e-60));
    }

    #[test]
    fn v_jet_coefficients() {
        let m = PotentialModel::new(ModelId::Quartic);
        let j = m.v_jet(Real::ZERO, Real::ONE, 4).unwrap();
        for (c, w) in j.coeffs.iter().zip([1.0, 4.0, 6.0, 4.0, 1.0]) {
            assert!(close(*c, Real::from_f64(w), 1e-60));
        }
        let c = PotentialModel::with_params(ModelId::Coulomb, &[], 0).unwrap();
        let j = c.v_jet(Real::ZERO, Real::TWO, 1).unwrap();
        assert!(close(j.coeffs[0], p("-0.5"), 1e-62));
        assert!(close(j.coeffs[1], p("0.25"), 1e-62));
    }

    #[test]
    fn hulthen_jet_matches_central_differences() {
        let m = PotentialModel::new(ModelId::Hulthen);
        let r0 = Real::LN2;
        let j = m.v_jet(Real::ZERO, r0, 2).unwrap();
        // Fourth-order central differences with h = 1e-8.
        let h = Real::pow10(-8);
        let v = |x: Real| m.v_eval(Real::ZERO, x).unwrap();
        let d1 = (v(r0 - h * 2.0) - v(r0 - h) * 8.0 + v(r0 + h) * 8.0 - v(r0 + h * 2.0)) / (h * 12.0);
        let d2 = (-v(r0 - h * 2.0) + v(r0 - h) * 16.0 - v(r0) * 30.0 + v(r0 + h) * 16.0
            - v(r0 + h * 2.0))
            / (h.sqr() * 12.0);
        assert!(close(j.coeffs[1], d1, 1e-20));
        assert!(close(j.coeffs[2], d2 * 0.5, 1e-20));
    }

    #[test]
    fn order_zero_jet_equals_value() {
        for id in ModelId::ALL {
            let m = PotentialModel::new(id);
            let r = Real::from_f64(0.731);
            let v = m.v_eval(Real::ONE, r).unwrap();
            let j = m.v_jet(Real::ONE, r, 7).unwrap();
            assert_eq!(v, j.coeffs[0], "{id}");
        }
    }

    #[test]
    fn hulthen_closed_form() {
        let u = UnitScales::identity();
        let e = hulthen_energy(Real::ONE, Real::from_f64(4.0), 0, &u).unwrap();
        assert!(close(e, p("-2.25"), 1e-60));
        let e = hulthen_energy(Real::ONE, Real::from_f64(12.0), 1, &u).unwrap();
        assert!(close(e, p("-4"), 1e-60));
        assert!(matches!(
            hulthen_energy(Real::ONE, Real::from_f64(4.0), 1, &u),
            Err(PotentialError::NoBoundState(1))
        ));
        assert!(hulthen_energy(Real::ONE, Real::ONE, 0, &u).is_err());
        // Substituting back into s(√(ε+A) − √ε) = n + 1.
        let eps = -e;
        let lhs = (eps + 12.0).sqrt() - eps.sqrt();
        assert!(close(lhs, Real::TWO, 1e-60));
    }

    #[test]
    fn harmonic_reference() {
        let m = PotentialModel::new(ModelId::Harmonic);
        assert_eq!(m.reference_energy(0).unwrap(), Some(Real::ONE));
        assert_eq!(m.reference_energy(2).unwrap(), Some(Real::from_f64(5.0)));
    }

    #[test]
    fn modified_coulomb_small_alpha_limit() {
        let m = PotentialModel::with_params(ModelId::ModifiedCoulombDirac, &[("alpha", "1e-12")], 1)
            .unwrap();
        for r in [0.5, 2.0, 7.0] {
            let r = Real::from_f64(r);
            let v = m.v_eval(Real::ONE, r).unwrap();
            let want = -(r * 2.0).recip() + Real::TWO / r.sqr();
            assert!(close(v, want, 1e-20));
        }
    }

    #[test]
    fn modified_coulomb_energy_map_roundtrip() {
        let m = PotentialModel::new(ModelId::ModifiedCoulombDirac);
        let e = p("0.99999334014853888012");
        let eps = m.eig_param(e);
        assert!(close(m.energy_of_eig(eps), e, 1e-55));
        assert!(eps < Real::ZERO);
    }

    #[test]
    fn asymptotic_start_action() {
        let m = PotentialModel::new(ModelId::Quartic);
        let e = p("2.3936440164823031156");
        let tol = Real::pow10(-40);
        let z0 = m.asymptotic_start(e, tol, KForm::Plain).unwrap();
        let (_, b) = m.turning_points(e, KForm::Plain).unwrap();
        // Independent action integral with Simpson on a fine grid.
        let n = 20000;
        let h = (z0 - b).to_f64() / n as f64;
        let f = |z: f64| m.k2_at_z(e, Real::from_f64(z), KForm::Plain).unwrap().to_f64().abs().sqrt();
        let mut s = f(b.to_f64()) + f(z0.to_f64());
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(b.to_f64() + i as f64 * h);
        }
        let action = s * h / 3.0;
        assert!((action - 40.0 * std::f64::consts::LN_10).abs() < 0.05, "{action}");
        assert_eq!(m.asymptotic_start(e, Real::ONE, KForm::Plain).unwrap(), b);
    }

    #[test]
    fn quartic_outer_turning_point() {
        let m = PotentialModel::new(ModelId::Quartic);
        let e = Real::from_f64(2.5);
        let (a, b) = m.turning_points(e, KForm::Plain).unwrap();
        assert_eq!(a, Real::ZERO);
        let want = m.z_of_r(e.sqrt().sqrt());
        assert!(close(b, want, 1e-50));
        let (a, b2) = m.turning_points(e, KForm::Langer).unwrap();
        assert!(a > Real::ZERO && b2 < b);
    }

    #[test]
    fn unknown_models_and_parameters() {
        assert!(matches!("nope".parse::<ModelId>(), Err(PotentialError::UnknownModel(_))));
        assert!(PotentialModel::with_params(ModelId::Quartic, &[("q", "1")], 0).is_err());
        assert!(PotentialModel::with_params(ModelId::Harmonic, &[], 1).is_err());
        assert!(PotentialModel::with_params(ModelId::Hulthen, &[("A", "x")], 0).is_err());
    }
}
