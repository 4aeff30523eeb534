//! Subcommand drivers. Each returns a finished [`Report`]; the binary decides
//! where it goes and which exit code follows.

use std::f64::consts::PI;

use paralab_core::carleson::{build_carleson_field, profile_ratio, DyadicInterval};
use paralab_core::compactness::{
    bilinear_norm, dot, norm2, rellich_tail, run_weak_null_sequence, section_tail_profile,
    tail_norm, tensor_bessel, tensor_diagonal, tensor_pairing, BilinearTensor, Fixed, Gallery,
    SequenceSpec, Window,
};
use paralab_core::fourier::{l2_norm, pairing, sobolev_weight};
use paralab_core::littlewood_paley::relative_l2_error;
use paralab_core::paraproduct::{ModulatedSequence, Slot};
use paralab_core::{Complex64, LpFamily, ParaproductContext, TorusField, TorusGrid};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::{Check, Report, Table};
use crate::symbol::{RealizedSymbol, SymbolSpec};
use crate::trials;

pub const PARTITION_TOL: f64 = 1e-12;
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
pub const T1_SYMBOL_TOL: f64 = 1e-10;
pub const T1_TRANSPOSE_TOL: f64 = 1e-12;
pub const DUALITY_TOL: f64 = 1e-10;
pub const TENSOR_DUALITY_TOL: f64 = 1e-12;
pub const DECAY_RATIO: f64 = 0.1;
pub const NORM_TOL: f64 = 1e-6;
pub const EXACT_TOL: f64 = 1e-12;
pub const TRANSPOSE_TAIL_FLOOR: f64 = 1.0 - 1e-9;
/// Profile-ratio gates used to label a Carleson profile.
pub const VANISHING_GATE: f64 = 0.05;
pub const NON_VANISHING_GATE: f64 = 0.3;

pub fn family(cfg: &RunConfig) -> Result<LpFamily> {
    cfg.validate()?;
    let grid = TorusGrid::new(cfg.grid_size)?;
    Ok(LpFamily::new(grid, cfg.j_min, cfg.j_max, cfg.bridge()?)?)
}

pub fn symbol(cfg: &RunConfig, fam: &LpFamily) -> Result<RealizedSymbol> {
    cfg.symbol_spec.parse::<SymbolSpec>()?.realize(fam)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Partition of unity, Calderon reconstruction and square-function identity.
pub fn cmd_lpcheck(cfg: &RunConfig) -> Result<Report> {
    let fam = family(cfg)?;
    let mut report = Report::new("lpcheck", cfg);
    let band = fam.resolved_band();

    let mut table = Table::new("partition", &["k", "partition_sum", "residual"]);
    for k in 1..=band {
        let sum = fam.partition_sum(k);
        table.push(vec![k as f64, sum, (sum - 1.0).abs()]);
    }
    report.check(Check::less(
        "partition_residual",
        fam.partition_residual(),
        PARTITION_TOL,
    ));
    let psi_zero = fam.scales().all(|j| fam.psi_at(j, 0) == Ok(0.0));
    report.check(Check::flag("psi_vanishes_at_zero", psi_zero));

    let mut rng = trials::rng(cfg.seed, 1);
    let (mut recon, mut square) = (0.0f64, 0.0f64);
    for _ in 0..cfg.trials {
        let f = trials::band_limited_real(&fam, band, &mut rng)?;
        let target = f.zero_mean();
        let r = fam.calderon_reconstruct(&f)?;
        recon = recon.max(relative_l2_error(&r.field, &target)?);
        let s = l2_norm(&fam.square_function(&f)?);
        let t = l2_norm(&target);
        square = square.max((s - t).abs() / t.max(f64::MIN_POSITIVE));
    }
    report.check(Check::less(
        "reconstruction_error",
        recon,
        RECONSTRUCTION_TOL,
    ));
    report.check(Check::less(
        "square_function_error",
        square,
        RECONSTRUCTION_TOL,
    ));
    report.note("resolved_band", band);
    report.note("bridge", fam.bridge().name());
    report.note("trials", cfg.trials);
    report.table(table);
    Ok(report)
}

/// `|<a, c> - <b, d>| / (1 + |<a, c>|)`.
fn duality_gap(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / (1.0 + lhs.norm())
}

/// T(1) identities, transpose duality, Holder-Carleson chain and weak-null decay.
pub fn cmd_paraproduct(cfg: &RunConfig) -> Result<Report> {
    let fam = family(cfg)?;
    let b = symbol(cfg, &fam)?;
    let ctx = ParaproductContext::new(fam.clone(), b.field.clone())?;
    let grid = fam.grid();
    let band = fam.resolved_band();
    let mut report = Report::new("paraproduct", cfg);
    report.note("symbol_l2", l2_norm(&b.field));
    report.note("symbol_dropped_l2", b.dropped_l2);

    let t1 = ctx.verify_t1_identities()?;
    report.check(Check::less("t1_symbol_error", t1.err_b, T1_SYMBOL_TOL));
    report.check(Check::less(
        "t1_transpose1_norm",
        t1.err_t1,
        T1_TRANSPOSE_TOL,
    ));
    report.check(Check::less(
        "t1_transpose2_norm",
        t1.err_t2,
        T1_TRANSPOSE_TOL,
    ));

    let mut rng = trials::rng(cfg.seed, 2);
    let (mut gap1, mut gap2) = (0.0f64, 0.0f64);
    for _ in 0..cfg.trials {
        let f = trials::band_limited_real(&fam, band, &mut rng)?;
        let g = trials::band_limited_real(&fam, band, &mut rng)?;
        let h = trials::band_limited_real(&fam, band, &mut rng)?;
        let lhs = pairing(&ctx.apply(&f, &g)?, &h)?;
        gap1 = gap1.max(duality_gap(lhs, pairing(&ctx.transpose1(&h, &g)?, &f)?));
        gap2 = gap2.max(duality_gap(lhs, pairing(&ctx.transpose2(&f, &h)?, &g)?));
    }
    report.check(Check::less("duality_transpose1", gap1, DUALITY_TOL));
    report.check(Check::less("duality_transpose2", gap2, DUALITY_TOL));

    let mut rng = trials::rng(cfg.seed, 3);
    let mut holder = Table::new("holder", &["p", "q", "violations", "max_lhs_over_rhs"]);
    for &(p, q) in &cfg.exponents {
        let mut violations = 0usize;
        let mut worst = 0.0f64;
        for _ in 0..cfg.trials {
            let f = trials::band_limited_real(&fam, band, &mut rng)?;
            let g = trials::band_limited_real(&fam, band, &mut rng)?;
            let h = trials::unit_band_limited_real(&fam, band, &mut rng)?;
            let r = ctx.holder_chain_check(&f, &g, &h, p, q)?;
            violations += usize::from(!r.ok);
            if r.rhs > 0.0 {
                worst = worst.max(r.lhs / r.rhs);
            }
        }
        holder.push(vec![p, q, violations as f64, worst]);
        report.check(Check::at_most(
            format!("holder_violations_{p}_{q}"),
            violations as f64,
            0.0,
        ));
    }

    // f_n = e_n (1 + cos 2 pi x) against a smooth partner, in either slot
    let n_max = (grid.size() / 4) as i64;
    let profile = TorusField::from_fn(grid, |x| real(1.0 + (2.0 * PI * x).cos()));
    let partner = TorusField::from_fn(grid, |x| real(0.5 + (2.0 * PI * x).sin()));
    let mut decay = Table::new(
        "weak_null_decay",
        &["n", "norm_first_slot", "norm_second_slot"],
    );
    let mut tables = Vec::new();
    for slot in [Slot::First, Slot::Second] {
        let seq = ModulatedSequence {
            slot,
            profile: profile.clone(),
            partner: partner.clone(),
        };
        tables.push(ctx.weak_null_decay(&seq, n_max)?);
    }
    for (a, b) in tables[0].rows.iter().zip(&tables[1].rows) {
        decay.push(vec![a.0 as f64, a.1, b.1]);
    }
    for (table, name) in tables.iter().zip(["first", "second"]) {
        let head = table.head_max();
        let tail = table.tail_max();
        report.note(&format!("decay_head_max_{name}"), head);
        report.note(&format!("decay_tail_max_{name}"), tail);
        report.check(Check::at_most(
            format!("weak_null_decay_{name}"),
            tail,
            DECAY_RATIO * head,
        ));
    }
    report.table(decay);
    report.table(holder);
    Ok(report)
}

/// Expected class of a Carleson profile, turned into a gated check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Vanishing,
    NonVanishing,
}

impl std::str::FromStr for Expectation {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vanishing" => Ok(Expectation::Vanishing),
            "non-vanishing" => Ok(Expectation::NonVanishing),
            other => Err(CliError::Config(format!(
                "unknown expectation '{other}' (vanishing or non-vanishing)"
            ))),
        }
    }
}

pub fn classify(ratio: f64) -> &'static str {
    if ratio < VANISHING_GATE {
        "vanishing"
    } else if ratio > NON_VANISHING_GATE {
        "non-vanishing"
    } else {
        "indeterminate"
    }
}

/// Dyadic Carleson constant and vanishing profile of `|Q_j b|^2 dx ln2`.
pub fn cmd_carleson(cfg: &RunConfig, expect: Option<Expectation>) -> Result<Report> {
    let fam = family(cfg)?;
    let b = symbol(cfg, &fam)?;
    let mu = build_carleson_field(&fam, &b.field)?;
    let max_level = cfg.max_level.unwrap_or(cfg.j_max - 1).min(mu.max_level());
    let mut report = Report::new("carleson", cfg);

    let profile = mu.vanishing_profile(max_level)?;
    let mut table = Table::new("vanishing_profile", &["level", "carleson_constant"]);
    for &(l, c) in &profile {
        table.push(vec![l as f64, c]);
    }
    let head = profile[0].1;
    let scale = head.max(1.0);

    let monotone = profile.windows(2).all(|w| w[1].1 <= w[0].1);
    report.check(Check::flag("profile_nonincreasing", monotone));
    let constant = mu.carleson_constant(max_level)?;
    report.check(Check::at_most(
        "constant_matches_profile",
        (constant - head).abs(),
        EXACT_TOL * scale,
    ));
    let whole = mu.tent_mass(&DyadicInterval::whole())?;
    report.check(Check::at_most(
        "whole_tent_is_total_mass",
        (whole - mu.total_mass()).abs(),
        EXACT_TOL * whole.max(1.0),
    ));
    let doubled = build_carleson_field(&fam, &b.field.scale(real(2.0)))?;
    let c2 = doubled.carleson_constant(max_level)?;
    report.check(Check::at_most(
        "quadratic_homogeneity",
        (c2 - 4.0 * constant).abs(),
        EXACT_TOL * 4.0 * scale,
    ));

    let ratio = profile_ratio(&profile);
    report.note("max_level", max_level);
    report.note("profile_ratio", ratio);
    report.note("classification", classify(ratio));
    match expect {
        Some(Expectation::Vanishing) => {
            report.check(Check::less("profile_ratio", ratio, VANISHING_GATE))
        }
        Some(Expectation::NonVanishing) => {
            report.check(Check::greater("profile_ratio", ratio, NON_VANISHING_GATE))
        }
        None => {}
    }
    report.note("total_mass", mu.total_mass());
    report.note("symbol_dropped_l2", b.dropped_l2);
    report.table(table);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleOptions {
    pub window: i64,
    pub s: f64,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        Self { window: 64, s: 1.0 }
    }
}

/// Max duality gaps `(slot 1, slot 2)` of a tensor on random triples.
pub fn tensor_duality(t: &BilinearTensor, triples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = trials::rng(seed, 4);
    let (t1, t2) = (t.transpose1(), t.transpose2());
    let (mut g1, mut g2) = (0.0f64, 0.0f64);
    for _ in 0..triples {
        let x = trials::complex_vector(t.in1_window().len(), &mut rng);
        let y = trials::complex_vector(t.in2_window().len(), &mut rng);
        let z = trials::complex_vector(t.out_window().len(), &mut rng);
        let lhs = dot(&t.apply(&x, &y)?, &z);
        g1 = g1.max(duality_gap(lhs, dot(&t1.apply(&z, &y)?, &x)));
        g2 = g2.max(duality_gap(lhs, dot(&t2.apply(&x, &z)?, &y)));
    }
    Ok((g1, g2))
}

/// Gallery tensors: norms, tails, transposes and weak-null sequences.
pub fn cmd_examples(name: &str, opts: ExampleOptions, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let gallery: Gallery = name
        .parse()
        .map_err(|e: paralab_core::Error| CliError::Config(e.to_string()))?;
    if opts.window < 2 {
        return Err(CliError::Config(format!(
            "window {} must be >= 2",
            opts.window
        )));
    }
    if !(opts.s > 0.0 && opts.s.is_finite()) {
        return Err(CliError::Config(format!(
            "Sobolev order {} must be positive",
            opts.s
        )));
    }
    let mut report = Report::new(format!("examples {}", gallery.name()), cfg);
    report.note("window", opts.window);
    let m = opts.window;
    let t = match gallery {
        Gallery::Pairing => tensor_pairing(m)?,
        Gallery::Bessel => tensor_bessel(m, opts.s)?,
        Gallery::Diagonal => tensor_diagonal(m)?,
    };
    let (g1, g2) = tensor_duality(&t, cfg.trials, cfg.seed)?;
    report.check(Check::less(
        "tensor_duality_transpose1",
        g1,
        TENSOR_DUALITY_TOL,
    ));
    report.check(Check::less(
        "tensor_duality_transpose2",
        g2,
        TENSOR_DUALITY_TOL,
    ));
    let involution = t.transpose1().transpose1() == t && t.transpose2().transpose2() == t;
    report.check(Check::flag("transpose_involution", involution));
    match gallery {
        Gallery::Pairing => pairing_example(&t, m, cfg, &mut report)?,
        Gallery::Bessel => bessel_example(&t, m, opts.s, &mut report)?,
        Gallery::Diagonal => diagonal_example(&t, m, cfg, &mut report)?,
    }
    Ok(report)
}

fn pairing_example(t: &BilinearTensor, m: i64, cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let exact = (-m..=m)
        .all(|n| (-m..=m).all(|j| t.entry(0, n, j) == real(if n + j == 0 { 1.0 } else { 0.0 })));
    report.check(Check::flag("entries_exact", exact));
    let norm = bilinear_norm(t, cfg.restarts)?;
    report.check(Check::at_most("norm_error", (norm - 1.0).abs(), NORM_TOL));
    report.check(Check::at_most(
        "tail_after_scalar_output",
        tail_norm(t, 1, cfg.restarts)?,
        0.0,
    ));

    let steps = run_weak_null_sequence(t, &SequenceSpec::ParityShift, m)?;
    let mut seq = Table::new("parity_sequence", &["n", "output_norm"]);
    let mut alternates = true;
    for step in &steps {
        let expected = if step.n % 2 == 0 { 1.0 } else { 0.0 };
        alternates &= step.norm == expected && step.output[0] == real(expected);
        seq.push(vec![step.n as f64, step.norm]);
    }
    report.check(Check::flag("parity_alternates", alternates));

    // transposes have a vector output on {-M..M}; truncating it never helps
    let size = 2 * m as usize + 1;
    let (t1, t2) = (t.transpose1(), t.transpose2());
    let mut tails = Table::new(
        "transpose_tails",
        &["k", "tail_transpose1", "tail_transpose2"],
    );
    let (mut min1, mut min2) = (f64::INFINITY, f64::INFINITY);
    for k in 0..size {
        let a = tail_norm(&t1, k, cfg.restarts)?;
        let b = tail_norm(&t2, k, cfg.restarts)?;
        min1 = min1.min(a);
        min2 = min2.min(b);
        tails.push(vec![k as f64, a, b]);
    }
    report.check(Check::at_least(
        "transpose1_tail_min",
        min1,
        TRANSPOSE_TAIL_FLOOR,
    ));
    report.check(Check::at_least(
        "transpose2_tail_min",
        min2,
        TRANSPOSE_TAIL_FLOOR,
    ));
    report.note("norm", norm);
    report.table(seq);
    report.table(tails);
    Ok(())
}

fn bessel_example(t: &BilinearTensor, m: i64, s: f64, report: &mut Report) -> Result<()> {
    let w1 = sobolev_weight(1, -s / 2.0);
    let steps = run_weak_null_sequence(t, &SequenceSpec::ParityShift, m)?;
    let mut seq = Table::new(
        "parity_sequence",
        &["n", "coefficient_k1", "coefficient_k0", "output_norm"],
    );
    let mut worst = 0.0f64;
    let mut support_ok = true;
    for step in &steps {
        let (k, value) = if step.n % 2 == 1 { (1, w1) } else { (0, 1.0) };
        support_ok &= step.support.len() == 1 && step.support[0].0 == k;
        let at = |k: i64| {
            t.out_window()
                .position(k)
                .map_or(Complex64::new(0.0, 0.0), |p| step.output[p])
        };
        worst = worst.max((at(k) - real(value)).norm());
        seq.push(vec![step.n as f64, at(1).re, at(0).re, step.norm]);
    }
    report.check(Check::flag("parity_support", support_ok));
    report.check(Check::less("parity_coefficient_error", worst, EXACT_TOL));
    report.note("odd_value", w1);

    // section x -> T(x, e_0) is the Bessel multiplier; its truncated norm is the
    // largest weight left after removing the first K output positions
    let out = t.out_window();
    let ks: Vec<usize> = (0..=out.len()).collect();
    let e0 = t.in2_window().basis(0)?;
    let profile = section_tail_profile(t, &Fixed::Second(e0), &ks)?;
    let mut tails = Table::new("section_tail", &["k", "section_norm", "envelope"]);
    let mut gap = 0.0f64;
    for &(k, v) in &profile {
        let envelope = (k..out.len())
            .map(|p| out.frequency(p))
            .filter(|f| f.abs() <= m)
            .map(|f| sobolev_weight(f, -s / 2.0))
            .fold(0.0, f64::max);
        gap = gap.max((v - envelope).abs());
        tails.push(vec![k as f64, v, envelope]);
    }
    report.check(Check::less("section_envelope_error", gap, EXACT_TOL));
    report.table(seq);
    report.table(tails);
    Ok(())
}

fn diagonal_example(
    t: &BilinearTensor,
    m: i64,
    cfg: &RunConfig,
    report: &mut Report,
) -> Result<()> {
    let norm = bilinear_norm(t, cfg.restarts)?;
    report.check(Check::at_most("norm_error", (norm - 1.0).abs(), NORM_TOL));
    report.note("norm", norm);

    let steps = run_weak_null_sequence(t, &SequenceSpec::BasisWalk, m)?;
    let mut worst = 0.0f64;
    for (i, a) in steps.iter().enumerate() {
        for b in &steps[i + 1..] {
            let diff: Vec<Complex64> = a.output.iter().zip(&b.output).map(|(u, v)| u - v).collect();
            worst = worst.max((norm2(&diff) - 2f64.sqrt()).abs());
        }
    }
    report.check(Check::less("basis_distance_error", worst, EXACT_TOL));

    // fixed y_n = 1/n: the section tail is max_{n > K} |y_n| and tends to zero
    let win = Window::positive(m);
    let y: Vec<Complex64> = (1..=m).map(|n| real(1.0 / n as f64)).collect();
    let ks: Vec<usize> = (0..=m as usize).collect();
    let section = section_tail_profile(t, &Fixed::Second(y.clone()), &ks)?;
    let mut table = Table::new(
        "tails",
        &["k", "joint_tail", "section_tail", "section_expected"],
    );
    let (mut joint_gap, mut section_gap) = (0.0f64, 0.0f64);
    for &(k, sec) in &section {
        let expected = (k..win.len()).map(|p| y[p].norm()).fold(0.0, f64::max);
        section_gap = section_gap.max((sec - expected).abs());
        let joint = if k < m as usize {
            let v = tail_norm(t, k, cfg.restarts)?;
            joint_gap = joint_gap.max((v - 1.0).abs());
            v
        } else {
            0.0
        };
        table.push(vec![k as f64, joint, sec, expected]);
    }
    report.check(Check::at_most("joint_tail_error", joint_gap, NORM_TOL));
    report.check(Check::less("section_tail_error", section_gap, EXACT_TOL));
    report.check(Check::at_most(
        "section_tail_final",
        section.last().map_or(0.0, |r| r.1),
        0.0,
    ));
    report.table(table);
    Ok(())
}

pub fn default_rellich_ks() -> Vec<i64> {
    (0..=8).map(|e| 1i64 << e).collect()
}

/// Tail `(1 + 4 pi^2 K^2)^{-s/2}` of `H^s -> L^2` against the diagonal operator.
pub fn cmd_rellich(s: f64, ks: &[i64], cfg: &RunConfig) -> Result<Report> {
    if ks.is_empty() {
        return Err(CliError::Config("rellich needs at least one K".into()));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(CliError::Config(format!(
            "Sobolev order {s} must be positive"
        )));
    }
    if let Some(k) = ks.iter().find(|&&k| k < 1) {
        return Err(CliError::Config(format!("tail cut K = {k} must be >= 1")));
    }
    let mut report = Report::new("rellich", cfg);
    report.note("s", s);
    let mut table = Table::new("rellich_tail", &["k", "formula_value", "operator_value"]);
    let mut gap = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut decreasing = true;
    for &k in ks {
        let r = rellich_tail(s, k)?;
        gap = gap.max((r.formula_value - r.operator_value).abs());
        decreasing &= r.formula_value < prev;
        prev = r.formula_value;
        table.push(vec![k as f64, r.formula_value, r.operator_value]);
    }
    report.check(Check::less("formula_vs_operator", gap, EXACT_TOL));
    report.check(Check::flag("strictly_decreasing", decreasing));
    report.table(table);
    Ok(report)
}
