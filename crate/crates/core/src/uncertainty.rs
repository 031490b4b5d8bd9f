//! Numerical evaluation of the uncertainty inequalities: weighted moments,
//! Shannon entropy, concentration and essential supports, and one check
//! function per inequality, each producing an [`InequalityReport`].
//!
//! Checks come in two flavors. *Asserted* checks are expected to hold across
//! the whole seeded corpus and gate the verification suite's exit status.
//! *Diagnostic* checks evaluate a printed constant that fails an internal
//! consistency anchor (the alpha = 0 Pitt ratio, the s -> 2 limit of the
//! Lieb constant against the energy identity, and their descendants); they
//! are reported with full numbers but never asserted. Wherever a literal
//! constant is demoted to diagnostic, a companion row carries the
//! energy-identity-calibrated constant and is asserted instead; every report
//! names the convention it used.

use crate::error::{Error, Result};
use crate::grid::IndexSet2D;
use crate::qlct::LctParams;
use crate::qwlct::QwlctField;
use crate::reduce::pairwise_sum_by;
use crate::signal::{lp_norm, masked_energy, norm_sq, QSignal2D};
use crate::special::{digamma, pitt_constant};
use serde::Serialize;
use serde_json::{json, Map, Value};

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;
/// Cells with density below this contribute 0 to entropy (0 ln 0 = 0).
const ENTROPY_FLOOR: f64 = 1e-300;

/// Which way an inequality points; margin >= 0 always means "satisfied".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// `lhs >= rhs`; margin = lhs - rhs.
    #[serde(rename = "lhs>=rhs")]
    GreaterEq,
    /// `lhs <= rhs`; margin = rhs - lhs.
    #[serde(rename = "lhs<=rhs")]
    LessEq,
    /// `|lhs - rhs| <= tolerance`; margin = tolerance - |lhs - rhs|.
    #[serde(rename = "|lhs-rhs|<=tol")]
    Equality,
}

/// One evaluated inequality with everything needed to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub orientation: Orientation,
    /// Oriented so that margin >= -tolerance means satisfied.
    pub margin: f64,
    pub tolerance: f64,
    pub satisfied: bool,
    /// Whether the verification suite treats failure as fatal.
    pub asserted: bool,
    pub params: Map<String, Value>,
    pub conventions: Vec<String>,
    pub seed: u64,
}

impl InequalityReport {
    fn new(name: &str, lhs: f64, rhs: f64, orientation: Orientation, asserted: bool) -> Self {
        let tolerance = 1e-6 * (lhs.abs() + rhs.abs());
        let margin = match orientation {
            Orientation::GreaterEq => lhs - rhs,
            Orientation::LessEq => rhs - lhs,
            Orientation::Equality => tolerance - (lhs - rhs).abs(),
        };
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            orientation,
            margin,
            tolerance,
            satisfied: margin >= -tolerance,
            asserted,
            params: Map::new(),
            conventions: Vec::new(),
            seed: 0,
        }
    }

    /// Equality comparison at an explicit relative tolerance.
    fn new_equality(name: &str, lhs: f64, rhs: f64, rel_tol: f64, asserted: bool) -> Self {
        let tolerance = rel_tol * rhs.abs().max(lhs.abs());
        let margin = tolerance - (lhs - rhs).abs();
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            orientation: Orientation::Equality,
            margin,
            tolerance,
            satisfied: margin >= 0.0,
            asserted,
            params: Map::new(),
            conventions: Vec::new(),
            seed: 0,
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn note(mut self, convention: &str) -> Self {
        self.conventions.push(convention.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Attach an extra parameter (public counterpart of the internal builder).
    pub fn tagged(mut self, key: &str, value: Value) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Mark as informational: never gates the suite and counts as satisfied.
    fn demote(mut self, why: &str) -> Self {
        self.asserted = false;
        self.conventions.push(why.to_string());
        self
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.name, self.lhs, self.rhs, self.margin, self.satisfied
        )
    }
}

/// Serialize a batch of reports as a JSON array string plus the CSV summary.
pub fn render_reports(reports: &[InequalityReport]) -> (String, String) {
    let array = Value::Array(
        reports
            .iter()
            .map(|r| serde_json::to_value(r).expect("report serializes"))
            .collect(),
    );
    let json = serde_json::to_string_pretty(&array).expect("valid json");
    let mut csv = String::from("name,lhs,rhs,margin,satisfied\n");
    for r in reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    (json, csv)
}

fn matrix_json(p: &LctParams) -> Value {
    json!({"a": p.a(), "b": p.b(), "c": p.c(), "d": p.d()})
}

fn b_product(field: &QwlctField) -> f64 {
    let (a1, a2) = field.params();
    (a1.b() * a2.b()).abs()
}

/// Weight applied to the squared magnitude in the moment quadratures.
#[derive(Clone, Copy, Debug)]
pub enum MomentWeight {
    /// `|coord|^p`; the zero-coordinate cell is excluded when `p < 0`.
    PowAbs(f64),
    /// `ln |coord|`; the zero-coordinate cell is excluded.
    LnAbs,
}

impl MomentWeight {
    fn eval(&self, r: f64) -> f64 {
        match self {
            MomentWeight::PowAbs(p) => {
                if *p == 0.0 {
                    1.0
                } else {
                    r.powf(*p)
                }
            }
            MomentWeight::LnAbs => r.ln(),
        }
    }

    /// Singular weights skip the lattice point sitting exactly at 0; the
    /// continuum integral is finite and the cell is a measure-zero artifact.
    fn excludes_origin(&self) -> bool {
        match self {
            MomentWeight::PowAbs(p) => *p < 0.0,
            MomentWeight::LnAbs => true,
        }
    }
}

/// `sum weight(|x|) |f(x)|^2 cell` over the signal lattice.
pub fn signal_moment(f: &QSignal2D, weight: MomentWeight) -> f64 {
    let g = f.grid();
    let skip0 = weight.excludes_origin();
    let total = pairwise_sum_by(g.len(), &|k| {
        let (k1, k2) = g.unindex(k);
        let (x1, x2) = (g.coord1(k1), g.coord2(k2));
        let r = (x1 * x1 + x2 * x2).sqrt();
        if skip0 && r == 0.0 {
            0.0
        } else {
            weight.eval(r) * f.samples()[k].norm_sq()
        }
    });
    total * g.cell_area()
}

/// `sum weight(|w|) |G(w, u)|^2 dcell` with the u coordinates unweighted.
pub fn field_moment(field: &QwlctField, weight: MomentWeight) -> f64 {
    let wg = *field.w_grid();
    let plane = wg.len();
    let skip0 = weight.excludes_origin();
    let total = pairwise_sum_by(field.len(), &|k| {
        let kw = k % plane;
        let (kw1, kw2) = wg.unindex(kw);
        let (w1, w2) = (wg.coord1(kw1), wg.coord2(kw2));
        let r = (w1 * w1 + w2 * w2).sqrt();
        if skip0 && r == 0.0 {
            0.0
        } else {
            weight.eval(r) * field.values()[k].norm_sq()
        }
    });
    total * field.cell_measure()
}

/// Shannon entropy `-sum p ln p * cell` of a sampled nonnegative density.
pub fn entropy_of_density(p: &[f64], cell: f64) -> Result<f64> {
    if let Some(bad) = p.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "entropy needs a nonnegative finite density, got {bad}"
        )));
    }
    let total = pairwise_sum_by(p.len(), &|k| {
        let v = p[k];
        if v < ENTROPY_FLOOR {
            0.0
        } else {
            -v * v.ln()
        }
    });
    Ok(total * cell)
}

/// Entropy of `|G|^2` over the 4D field lattice.
pub fn field_entropy(field: &QwlctField) -> f64 {
    let total = pairwise_sum_by(field.len(), &|k| {
        let v = field.values()[k].norm_sq();
        if v < ENTROPY_FLOOR {
            0.0
        } else {
            -v * v.ln()
        }
    });
    total * field.cell_measure()
}

/// Entropy of `|f|^2` over the signal lattice.
pub fn signal_entropy(f: &QSignal2D) -> f64 {
    let total = pairwise_sum_by(f.samples().len(), &|k| {
        let v = f.samples()[k].norm_sq();
        if v < ENTROPY_FLOOR {
            0.0
        } else {
            -v * v.ln()
        }
    });
    total * f.grid().cell_area()
}

/// Concentration defect of a target on a set.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConcentrationResult {
    /// Smallest epsilon such that the target is epsilon-concentrated:
    /// `||restriction to the complement|| / ||target||`.
    pub epsilon: f64,
    /// Lebesgue measure of the set.
    pub measure: f64,
    /// Number of member cells.
    pub cells: usize,
}

/// Smallest epsilon for which `f` is epsilon-concentrated on `set`.
pub fn concentration_eps(f: &QSignal2D, set: &IndexSet2D) -> Result<ConcentrationResult> {
    f.grid().ensure_matches(set.grid())?;
    let total = pairwise_sum_by(f.samples().len(), &|k| f.samples()[k].norm_sq());
    if total == 0.0 {
        return Err(Error::ZeroInput);
    }
    let outside = masked_energy(f.samples(), set.complement().members());
    Ok(ConcentrationResult {
        epsilon: (outside / total).max(0.0).sqrt(),
        measure: set.measure(),
        cells: set.member_count(),
    })
}

/// Boolean mask over the 4D field lattice.
#[derive(Clone, Debug)]
pub struct FieldMask {
    members: Vec<bool>,
    cell_measure: f64,
}

impl FieldMask {
    pub fn full(field: &QwlctField) -> Self {
        FieldMask { members: vec![true; field.len()], cell_measure: field.cell_measure() }
    }

    pub fn empty(field: &QwlctField) -> Self {
        FieldMask { members: vec![false; field.len()], cell_measure: field.cell_measure() }
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn member_count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn measure(&self) -> f64 {
        self.member_count() as f64 * self.cell_measure
    }
}

/// Smallest epsilon for which the field is epsilon-concentrated on `mask`.
pub fn field_concentration_eps(field: &QwlctField, mask: &FieldMask) -> Result<ConcentrationResult> {
    if mask.members.len() != field.len() {
        return Err(Error::InvalidArgument("mask does not match field size".into()));
    }
    let total = pairwise_sum_by(field.len(), &|k| field.values()[k].norm_sq());
    if total == 0.0 {
        return Err(Error::ZeroInput);
    }
    let outside = pairwise_sum_by(field.len(), &|k| {
        if mask.members[k] {
            0.0
        } else {
            field.values()[k].norm_sq()
        }
    });
    Ok(ConcentrationResult {
        epsilon: (outside / total).max(0.0).sqrt(),
        measure: mask.measure(),
        cells: mask.member_count(),
    })
}

/// Greedy essential support: cells in decreasing `|G|^2` order until the
/// retained energy reaches `(1 - eps^2)` of the total. Ties break by index,
/// so the selection is deterministic.
pub fn essential_support(field: &QwlctField, eps: f64) -> Result<(FieldMask, ConcentrationResult)> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps must be in [0, 1], got {eps}")));
    }
    let energies: Vec<f64> = field.values().iter().map(|q| q.norm_sq()).collect();
    let total = pairwise_sum_by(energies.len(), &|k| energies[k]);
    if total == 0.0 {
        return Err(Error::ZeroInput);
    }
    let mut order: Vec<u32> = (0..energies.len() as u32).collect();
    order.sort_by(|&a, &b| {
        energies[b as usize]
            .partial_cmp(&energies[a as usize])
            .expect("finite energies")
            .then(a.cmp(&b))
    });
    let threshold = (1.0 - eps * eps) * total;
    let mut retained = 0.0;
    let mut members = vec![false; energies.len()];
    let mut cells = 0usize;
    for &idx in &order {
        if retained >= threshold {
            break;
        }
        retained += energies[idx as usize];
        members[idx as usize] = true;
        cells += 1;
    }
    let mask = FieldMask { members, cell_measure: field.cell_measure() };
    let achieved = ((total - retained) / total).max(0.0).sqrt();
    Ok((
        mask,
        ConcentrationResult {
            epsilon: achieved,
            measure: cells as f64 * field.cell_measure(),
            cells,
        },
    ))
}

/// Essential support of a 2D signal, same greedy construction.
pub fn essential_support_signal(
    f: &QSignal2D,
    eps: f64,
) -> Result<(IndexSet2D, ConcentrationResult)> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps must be in [0, 1], got {eps}")));
    }
    let energies: Vec<f64> = f.samples().iter().map(|q| q.norm_sq()).collect();
    let total = pairwise_sum_by(energies.len(), &|k| energies[k]);
    if total == 0.0 {
        return Err(Error::ZeroInput);
    }
    let mut order: Vec<u32> = (0..energies.len() as u32).collect();
    order.sort_by(|&a, &b| {
        energies[b as usize]
            .partial_cmp(&energies[a as usize])
            .expect("finite energies")
            .then(a.cmp(&b))
    });
    let threshold = (1.0 - eps * eps) * total;
    let mut retained = 0.0;
    let mut members = vec![false; energies.len()];
    let mut cells = 0usize;
    for &idx in &order {
        if retained >= threshold {
            break;
        }
        retained += energies[idx as usize];
        members[idx as usize] = true;
        cells += 1;
    }
    let set = IndexSet2D::from_members(*f.grid(), members)?;
    let achieved = ((total - retained) / total).max(0.0).sqrt();
    let measure = cells as f64 * f.grid().cell_area();
    Ok((set, ConcentrationResult { epsilon: achieved, measure, cells }))
}

// ---------------------------------------------------------------------------
// checks
// ---------------------------------------------------------------------------

/// Energy identity: field energy against `||f||^2 ||phi||^2` at an explicit
/// relative quadrature tolerance.
pub fn check_parseval(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
    rel_tol: f64,
) -> InequalityReport {
    let lhs = field.energy();
    let rhs = norm_sq(f) * norm_sq(phi);
    InequalityReport::new_equality("parseval_energy", lhs, rhs, rel_tol, true)
        .with("rel_tol", json!(rel_tol))
        .with("matrix1", matrix_json(field.params().0))
        .with("matrix2", matrix_json(field.params().1))
        .note("energy identity; tolerance is the recorded quadrature budget")
}

/// Symmetric real scalar product of two fields on the same lattices:
/// `sum [G1 conj(G2)]_0 * cell`.
pub fn field_scalar_inner(g1: &QwlctField, g2: &QwlctField) -> Result<f64> {
    if g1.len() != g2.len()
        || !g1.w_grid().approx_eq(g2.w_grid())
        || !g1.u_grid().approx_eq(g2.u_grid())
    {
        return Err(Error::GridMismatch("fields live on different lattices".into()));
    }
    let s = pairwise_sum_by(g1.len(), &|k| {
        (g1.values()[k] * g2.values()[k].conj()).scalar_part()
    });
    Ok(s * g1.cell_measure())
}

/// Polarized energy identity with a second signal/window pair:
/// `<G_phi f, G_psi g> = [(f,g)(phi,psi)]_0`. With `phi = psi` the right side
/// becomes `||phi||^2 <f,g>`; with `f = g` it becomes `||f||^2 <phi,psi>`.
#[allow(clippy::too_many_arguments)] // two signal/window pairs plus the transform setup
pub fn check_parseval_polarized(
    f: &QSignal2D,
    g: &QSignal2D,
    phi: &QSignal2D,
    psi: &QSignal2D,
    a1: &LctParams,
    a2: &LctParams,
    shift_grid: &crate::grid::Grid2D,
    rel_tol: f64,
) -> Result<InequalityReport> {
    let field_f = crate::qwlct::qwlct_forward(f, phi, a1, a2, shift_grid)?;
    let field_g = crate::qwlct::qwlct_forward(g, psi, a1, a2, shift_grid)?;
    let lhs = field_scalar_inner(&field_f, &field_g)?;
    let rhs = (crate::signal::inner_product(f, g)? * crate::signal::inner_product(phi, psi)?)
        .scalar_part();
    // both sides can vanish for orthogonal pairs, so the tolerance is scaled
    // by the Cauchy-Schwarz ceiling of the identity instead of |rhs|
    let scale = lp_norm(f, 2.0)? * lp_norm(g, 2.0)? * lp_norm(phi, 2.0)? * lp_norm(psi, 2.0)?;
    let mut report = InequalityReport::new_equality("parseval_polarized", lhs, rhs, rel_tol, true);
    report.tolerance = rel_tol * scale;
    report.margin = report.tolerance - (lhs - rhs).abs();
    report.satisfied = report.margin >= 0.0;
    Ok(report
        .with("rel_tol", json!(rel_tol))
        .with("scale", json!(scale))
        .with("matrix1", matrix_json(a1))
        .with("matrix2", matrix_json(a2))
        .note("scalar part of (f,g)(phi,psi) against the field scalar product"))
}

/// Sup-norm bound `max |G| <= ||f|| ||phi|| / (2 pi sqrt(|b1 b2|))`.
pub fn check_boundedness(f: &QSignal2D, phi: &QSignal2D, field: &QwlctField) -> InequalityReport {
    let lhs = field.max_abs();
    let rhs = lp_norm(f, 2.0).unwrap_or(0.0) * lp_norm(phi, 2.0).unwrap_or(0.0)
        / (TAU * b_product(field).sqrt());
    InequalityReport::new("boundedness", lhs, rhs, Orientation::LessEq, true)
        .with("matrix1", matrix_json(field.params().0))
        .with("matrix2", matrix_json(field.params().1))
        .note("|b| = |b1 b2| in the transform constant")
}

/// Pitt-type weighted bound, diagnostic only: the printed constant fails the
/// alpha = 0 energy-identity anchor by the factor 4 pi^2, so both the
/// literal and the calibrated constants are reported without assertion.
pub fn check_pitt(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
    alpha: f64,
) -> Result<Vec<InequalityReport>> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "pitt check needs 0 <= alpha <= 2, got {alpha}"
        )));
    }
    let consts = pitt_constant(alpha, 2)?;
    let b = b_product(field);
    let lhs = field_moment(field, MomentWeight::PowAbs(-alpha));
    let x_moment = signal_moment(f, MomentWeight::PowAbs(alpha));
    let phi_norm = norm_sq(phi);
    let base = phi_norm * x_moment / (4.0 * PI * PI * b.powf(alpha));
    let mut reports = Vec::new();
    for (tag, m_alpha) in [("literal", consts.literal), ("calibrated", consts.calibrated)] {
        let rhs = m_alpha * base;
        let r = InequalityReport::new(
            &format!("pitt_{tag}"),
            lhs,
            rhs,
            Orientation::LessEq,
            false,
        )
        .with("alpha", json!(alpha))
        .with("m_alpha", json!(m_alpha))
        .with("lhs_over_rhs", json!(lhs / rhs))
        .with("matrix1", matrix_json(field.params().0))
        .with("matrix2", matrix_json(field.params().1))
        .note("diagnostic: printed constant fails the alpha = 0 energy-identity anchor")
        .note("|b| = |b1 b2|; zero-frequency cell excluded for alpha > 0");
        reports.push(r);
    }
    Ok(reports)
}

/// Lieb-type `L^s` bound for s > 2. Literal row is diagnostic (the printed
/// constant contradicts the energy identity as s -> 2); the asserted row
/// multiplies it by the Hausdorff-Young factor `(2 pi)^{2/s}` restoring the
/// unnormalized-transform normalization.
pub fn check_lieb_inequality(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
    s: f64,
) -> Result<Vec<InequalityReport>> {
    if !(s > 2.0) {
        return Err(Error::InvalidArgument(format!(
            "lieb inequality needs s > 2 (s = 2 is the energy identity), got {s}"
        )));
    }
    let b = b_product(field);
    let sp = s / (s - 1.0);
    let d_ss = (4.0 / s).powf(1.0 / s) * (4.0 / sp).powf(1.0 / sp);
    let lhs = field.lp_norm(s)?;
    let norms = lp_norm(f, 2.0)? * lp_norm(phi, 2.0)?;
    let rhs_literal = b.powf(1.0 / s - 0.5) / TAU * d_ss * norms;
    let rhs_calibrated = TAU.powf(2.0 / s) * rhs_literal;
    Ok(vec![
        InequalityReport::new("lieb_inequality_literal", lhs, rhs_literal, Orientation::LessEq, false)
            .with("s", json!(s))
            .with("d_ss", json!(d_ss))
            .note("diagnostic: printed constant fails the s -> 2 energy-identity anchor")
            .note("|b| = |b1 b2|"),
        InequalityReport::new("lieb_inequality", lhs, rhs_calibrated, Orientation::LessEq, true)
            .with("s", json!(s))
            .with("d_ss", json!(d_ss))
            .note("constant calibrated by the Hausdorff-Young factor (2 pi)^{2/s}")
            .note("|b| = |b1 b2|"),
    ])
}

/// Logarithmic uncertainty bound. The literal printed form (coefficient
/// `||phi||^2 / (4 pi^2)` and right side `(Delta + ln|b1 b2|)/(4 pi^2)`) is
/// diagnostic; the asserted row carries the mass-calibrated form
/// `||phi||^2 <ln|x|>_f + <ln|w|>_G >= (Delta + ln min(|b1|,|b2|)) ||f||^2 ||phi||^2`.
pub fn check_log_up(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
) -> Result<Vec<InequalityReport>> {
    let f_norm = norm_sq(f);
    let phi_norm = norm_sq(phi);
    if f_norm == 0.0 || phi_norm == 0.0 {
        return Err(Error::ZeroInput);
    }
    let (a1, a2) = field.params();
    let delta = digamma(0.5)? - PI.ln();
    let x_ln = signal_moment(f, MomentWeight::LnAbs);
    let w_ln = field_moment(field, MomentWeight::LnAbs);
    let energy = f_norm * phi_norm;

    let b_prod = (a1.b() * a2.b()).abs();
    let b_euclid = (a1.b() * a1.b() + a2.b() * a2.b()).sqrt();
    let b_min = a1.b().abs().min(a2.b().abs());

    let lhs_literal = phi_norm / (4.0 * PI * PI) * x_ln + w_ln;
    let rhs_literal = (delta + b_prod.ln()) / (4.0 * PI * PI) * energy;
    let rhs_euclid = (delta + b_euclid.ln()) / (4.0 * PI * PI) * energy;
    let lhs_cal = phi_norm * x_ln + w_ln;
    let rhs_cal = (delta + b_min.ln()) * energy;

    Ok(vec![
        InequalityReport::new("log_up_literal", lhs_literal, rhs_literal, Orientation::GreaterEq, false)
            .with("delta", json!(delta))
            .note("diagnostic: printed form inherits the unitary-convention mass slip")
            .note("|b| = |b1 b2|"),
        InequalityReport::new("log_up_literal_euclid", lhs_literal, rhs_euclid, Orientation::GreaterEq, false)
            .with("delta", json!(delta))
            .note("diagnostic second convention: |b| = sqrt(b1^2 + b2^2)"),
        InequalityReport::new("log_up", lhs_cal, rhs_cal, Orientation::GreaterEq, true)
            .with("delta", json!(delta))
            .with("ln_argument", json!(b_min))
            .note("mass-calibrated form for the unnormalized transform; |b| = min(|b1|, |b2|)")
            .note("zero-coordinate cells excluded from ln-weight sums"),
    ])
}

/// Entropic uncertainty bound, asserted when `|b1 b2| >= 1/(4 pi^2)`.
pub fn check_entropic(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
) -> Result<InequalityReport> {
    let f_norm = norm_sq(f);
    let phi_norm = norm_sq(phi);
    if f_norm == 0.0 || phi_norm == 0.0 {
        return Err(Error::ZeroInput);
    }
    let b = b_product(field);
    let n = f_norm * phi_norm;
    let lhs = field_entropy(field);
    let rhs = (2.0f64.ln() - TAU.ln() - b.ln()) / (2.0 * PI * PI) * n - n * n.ln();
    let threshold = 1.0 / (4.0 * PI * PI);
    let mut report = InequalityReport::new("entropic_up", lhs, rhs, Orientation::GreaterEq, true)
        .with("b_product", json!(b))
        .with("precondition_threshold", json!(threshold))
        .note("|b| = |b1 b2| per the theorem's explicit ln|b1 b2|");
    if b < threshold * (1.0 - 1e-12) {
        report = report.demote("precondition unmet: |b1 b2| < 1/(4 pi^2); reported, not asserted");
        report.satisfied = true;
        report.params.insert("precondition_met".into(), json!(false));
    } else {
        report.params.insert("precondition_met".into(), json!(true));
    }
    Ok(report)
}

/// Concentration lower bound on the essential support measure for s > 2.
/// Literal row diagnostic, calibrated row (corrected Lieb constant) asserted.
pub fn check_lieb_up(field: &QwlctField, eps: f64, s: f64) -> Result<Vec<InequalityReport>> {
    if !(s > 2.0) {
        return Err(Error::InvalidArgument(format!("lieb up needs s > 2, got {s}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("lieb up needs 0 <= eps < 1, got {eps}")));
    }
    let (_, conc) = essential_support(field, eps)?;
    let b = b_product(field);
    let sp = s / (s - 1.0);
    let d_ss = (4.0 / s).powf(1.0 / s) * (4.0 / sp).powf(1.0 / sp);
    let shape = (1.0 - eps * eps).powf(s / (s - 2.0)) * (d_ss / TAU).powf(2.0 * s / (2.0 - s));
    let rhs_literal = b * shape;
    let rhs_calibrated = rhs_literal * TAU.powf(-4.0 / (s - 2.0));
    let lhs = conc.measure;
    let attach = |r: InequalityReport| {
        r.with("s", json!(s))
            .with("eps", json!(eps))
            .with("achieved_eps", json!(conc.epsilon))
            .with("support_cells", json!(conc.cells))
            .note("|Omega| = essential support measure at the requested eps")
            .note("|b| = |b1 b2|")
    };
    Ok(vec![
        attach(InequalityReport::new(
            "lieb_up_literal",
            lhs,
            rhs_literal,
            Orientation::GreaterEq,
            false,
        ))
        .note("diagnostic: inherits the printed Lieb constant"),
        attach(InequalityReport::new(
            "lieb_up",
            lhs,
            rhs_calibrated,
            Orientation::GreaterEq,
            true,
        ))
        .note("bound carries the (2 pi)^{-4/(s-2)} calibration of the corrected Lieb constant"),
    ])
}

/// Donoho-Stark support bound at one shift index. `lambda` masks the spatial
/// lattice of the modified signal, `xi` masks the frequency lattice of the
/// field slice. Literal 2 pi row diagnostic; asserted row uses the
/// kernel-derived constant `4 pi^2 |b|^2`.
pub fn check_donoho_stark(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
    lambda: &IndexSet2D,
    xi: &IndexSet2D,
    u_index: (usize, usize),
) -> Result<Vec<InequalityReport>> {
    let ug = field.u_grid();
    let u = (ug.coord1(u_index.0), ug.coord2(u_index.1));
    let fu = crate::qwlct::modified_signal(f, phi, u)?;
    let slice = field.slice(u_index.0, u_index.1);
    let eps_lambda = concentration_eps(&fu, lambda)?;
    let eps_xi = concentration_eps(&slice, xi)?;

    let b = b_product(field);
    let lhs = eps_lambda.measure * (b * eps_xi.measure);
    let base = 1.0 - eps_lambda.epsilon - eps_xi.epsilon;
    let vacuous = base < 0.0;
    let rhs_literal = if vacuous { 0.0 } else { TAU * base * base };
    let rhs_calibrated = if vacuous { 0.0 } else { 4.0 * PI * PI * b * b * base * base };

    let attach = |r: InequalityReport| {
        let mut r = r
            .with("eps_lambda", json!(eps_lambda.epsilon))
            .with("eps_xi", json!(eps_xi.epsilon))
            .with("measure_lambda", json!(eps_lambda.measure))
            .with("measure_b_xi", json!(b * eps_xi.measure))
            .with("u_index", json!([u_index.0, u_index.1]))
            .note("per-shift reading: concentration of f_u on Lambda and of the slice on Xi")
            .note("|b Xi| = |b1 b2| * measure(Xi)");
        if vacuous {
            r = r.note("vacuous: eps_lambda + eps_xi >= 1, bound degenerates to 0");
        }
        r
    };
    Ok(vec![
        attach(InequalityReport::new(
            "donoho_stark_literal",
            lhs,
            rhs_literal,
            Orientation::GreaterEq,
            false,
        ))
        .note("diagnostic: printed 2 pi constant is not implied by the kernel bound for small |b|"),
        attach(InequalityReport::new(
            "donoho_stark",
            lhs,
            rhs_calibrated,
            Orientation::GreaterEq,
            true,
        ))
        .note("asserted constant 4 pi^2 |b|^2 from the Hilbert-Schmidt kernel bound"),
    ])
}

/// Wrap a lattice covariance/parity deviation as a report: the two sides of
/// the identity must agree within `rel_tol * max |G|`.
pub fn covariance_report(
    name: &str,
    dev: &crate::qwlct::CovarianceDeviation,
    rel_tol: f64,
) -> InequalityReport {
    let mut r = InequalityReport::new(
        name,
        dev.max_deviation,
        rel_tol * dev.max_abs,
        Orientation::LessEq,
        true,
    );
    // the identity itself is exact; the tolerance is fp-noise budget only
    r.tolerance = 0.0;
    r.satisfied = r.margin >= 0.0;
    r.params.insert("max_abs".into(), json!(dev.max_abs));
    r.params.insert("compared_cells".into(), json!(dev.compared));
    r.params.insert("rel_tol".into(), json!(rel_tol));
    r.conventions.push("both sides evaluated on the overlapping lattice cells only".into());
    r
}

/// Heisenberg-Weyl product bound, evaluated in the normalization the worked
/// example states it for: `||f|| = 1`, `||phi||^2 = 4 pi^2`. General inputs
/// are rescaled to that normalization internally and the factors recorded.
pub fn check_heisenberg(
    f: &QSignal2D,
    phi: &QSignal2D,
    field: &QwlctField,
) -> Result<InequalityReport> {
    let f_norm = norm_sq(f);
    let phi_norm = norm_sq(phi);
    if f_norm == 0.0 || phi_norm == 0.0 {
        return Err(Error::ZeroInput);
    }
    let (a1, a2) = field.params();
    let x_moment = signal_moment(f, MomentWeight::PowAbs(2.0)) / f_norm;
    let w_moment =
        field_moment(field, MomentWeight::PowAbs(2.0)) * (4.0 * PI * PI) / (f_norm * phi_norm);
    let lhs = (x_moment * w_moment).sqrt();
    let b_euclid = (a1.b() * a1.b() + a2.b() * a2.b()).sqrt();
    let rhs = b_euclid / (4.0 * PI);
    Ok(
        InequalityReport::new("heisenberg", lhs, rhs, Orientation::GreaterEq, true)
            .with("x_moment_normalized", json!(x_moment))
            .with("w_moment_normalized", json!(w_moment))
            .with("f_norm_sq", json!(f_norm))
            .with("phi_norm_sq", json!(phi_norm))
            .note("|b| = sqrt(b1^2 + b2^2), the only reading matching the printed numeric check")
            .note("evaluated at the stated normalization ||f|| = 1, ||phi||^2 = 4 pi^2"),
    )
}
