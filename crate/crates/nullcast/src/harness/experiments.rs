//! Seeded Monte Carlo execution, aggregation and CSV emission.
//!
//! Every experiment is deterministic in (config, seed): sweep-point
//! geometry comes from the config seed, trial noise from seed + trial
//! index (ChaCha8 behind every draw), and aggregation reduces trials in
//! index order regardless of how the worker pool scheduled them. Two runs
//! with the same config produce byte-identical CSV.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::concurrence::{
    build_feedback, coop_concur, noncoop_concur, normalized_consensus_distance, FeedbackMessage,
    TxSelection,
};
use crate::end_to_end::{
    build_pairwise, detect_waveform, mismatch_loss, simulate_received, snr_with_uncertainty,
    ChannelParams, MismatchGeometry,
};
use crate::error::{Error, Result};
use crate::harness::config::{Experiment, ExperimentConfig};
use crate::identification::{
    composite_filter, identify_dimensions, np_threshold, SingletonDictionary,
};
use crate::scenario::{self, UncertaintySpec};
use crate::signaling::{
    basis_waveform, design_waveform, psd, select_column, waveform_book, zeros, TIE_TOL,
};
use crate::stats::{mean_interval, wilson_interval};
use crate::subspace::projector_from_basis;

/// One aggregate CSV row: the parameter tuple, a named quantity, its
/// value, a 95% interval and the trial count behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub params: Vec<(&'static str, String)>,
    pub quantity: &'static str,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_trials: u64,
}

/// One raw Monte Carlo outcome row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub experiment: &'static str,
    pub trial: u64,
    pub params: Vec<(&'static str, String)>,
    pub outcomes: Vec<(&'static str, f64)>,
}

/// Table returned by [`run_experiment`]; raw records are collected only
/// when the config names a raw output path.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub aggregates: Vec<AggregateRow>,
    pub raw: Vec<TrialRecord>,
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

fn channel(cfg: &ExperimentConfig, ep_db: f64) -> ChannelParams {
    ChannelParams {
        gain: cfg.gain,
        tx_power: cfg.tx_power,
        noise_density: cfg.noise_density,
        inr_bar: cfg.inr_bar,
        ep_over_n0_db: ep_db,
    }
}

fn trial_seed(base: u64, trial: u64) -> u64 {
    base.wrapping_add(trial)
}

/// Runs trials on the worker pool (capped by NULLCAST_THREADS) and returns
/// the outcomes in trial order.
fn run_trials<T: Send>(trials: usize, f: impl Fn(u64) -> T + Sync) -> Vec<T> {
    let requested = std::env::var("NULLCAST_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1);
    match requested {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("worker pool")
            .install(|| (0..trials as u64).into_par_iter().map(&f).collect()),
        None => (0..trials as u64).into_par_iter().map(&f).collect(),
    }
}

/// Validates, runs and writes the experiment described by the config.
pub fn run_experiment(experiment: Experiment, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate(experiment)?;
    let output = compute_experiment(experiment, cfg)?;
    write_aggregate_csv(&cfg.out, &output.aggregates)?;
    if let Some(raw_path) = &cfg.raw_out {
        write_raw_csv(raw_path, &output.raw)?;
    }
    Ok(output)
}

/// Runs the experiment without touching the filesystem.
pub fn compute_experiment(
    experiment: Experiment,
    cfg: &ExperimentConfig,
) -> Result<ExperimentOutput> {
    cfg.validate(experiment)?;
    match experiment {
        Experiment::Psd => psd_experiment(cfg),
        Experiment::Zplane => zplane_experiment(cfg),
        Experiment::LossGrid => loss_grid_experiment(cfg),
        Experiment::DetectProb => detect_prob_experiment(cfg),
        Experiment::RocRx => rx_roc_experiment(cfg, Experiment::RocRx),
        Experiment::PmdVsSnr => rx_roc_experiment(cfg, Experiment::PmdVsSnr),
        Experiment::CrocNoncoop => concurrence_experiment(cfg, Experiment::CrocNoncoop),
        Experiment::CrocCoop => concurrence_experiment(cfg, Experiment::CrocCoop),
        Experiment::DofCountTx => concurrence_experiment(cfg, Experiment::DofCountTx),
        Experiment::Chordal => concurrence_experiment(cfg, Experiment::Chordal),
    }
}

// ---------------------------------------------------------------- psd --

fn psd_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let kind = cfg.basis_kind()?;
    let n_fft = 8 * cfg.n;
    let mut rows = Vec::new();
    for (case, spec) in [
        ("no_uncertainty", UncertaintySpec::NONE),
        (
            "max_uncertainty",
            UncertaintySpec {
                eps: cfg.d,
                delta: 0,
                false_alarms: 0,
            },
        ),
    ] {
        let env = scenario::build(cfg.n, cfg.d, kind, spec, cfg.seed)?;
        let p = projector_from_basis(env.sensed_noise_basis());
        let (n_star, _) = select_column(&p, TIE_TOL)?;
        let w = design_waveform(&p, n_star)?;
        let spectrum = psd(&w, n_fft)?;
        for (bin, v) in spectrum.iter().enumerate() {
            rows.push(AggregateRow {
                params: vec![
                    ("case", case.to_string()),
                    ("bin", bin.to_string()),
                    ("freq_norm", fmt(bin as f64 / n_fft as f64)),
                ],
                quantity: "psd_db",
                value: *v,
                ci_low: *v,
                ci_high: *v,
                n_trials: 1,
            });
        }
    }
    Ok(ExperimentOutput {
        aggregates: rows,
        raw: Vec::new(),
    })
}

// ------------------------------------------------------------- zplane --

fn zplane_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let kind = cfg.basis_kind()?;
    let mut rows = Vec::new();
    let mut push_roots = |case: &str, roots: &[num_complex::Complex64]| {
        for (idx, z) in roots.iter().enumerate() {
            let quantities: [(&'static str, f64); 4] = [
                ("re", z.re),
                ("im", z.im),
                ("radius", z.norm()),
                ("angle", z.arg()),
            ];
            for (quantity, v) in quantities {
                rows.push(AggregateRow {
                    params: vec![("case", case.to_string()), ("root", idx.to_string())],
                    quantity,
                    value: v,
                    ci_low: v,
                    ci_high: v,
                    n_trials: 1,
                });
            }
        }
    };

    let env = scenario::build(cfg.n, cfg.d, kind, UncertaintySpec::NONE, cfg.seed)?;
    let p = projector_from_basis(env.sensed_noise_basis());
    let (n_star, _) = select_column(&p, TIE_TOL)?;
    let w = design_waveform(&p, n_star)?;
    push_roots("no_uncertainty", &zeros(&w)?);

    // Complete ambiguity: every projector diagonal ties, so the book is
    // only defined relative to a coordinate choice. The representative is
    // taken in the coordinates indexed by the sensed DoF, where entry n is
    // the n-th basis column.
    let env_max = scenario::build(
        cfg.n,
        cfg.d,
        kind,
        UncertaintySpec {
            eps: cfg.d,
            delta: 0,
            false_alarms: 0,
        },
        cfg.seed,
    )?;
    let w_max = basis_waveform(env_max.sensed_noise_basis(), 0);
    push_roots("max_uncertainty", &zeros(&w_max)?);

    Ok(ExperimentOutput {
        aggregates: rows,
        raw: Vec::new(),
    })
}

// ---------------------------------------------------------- loss grid --

fn loss_grid_experiment(_cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let steps = 20usize;
    let mut rows = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let rho_t = i as f64 / steps as f64;
            let rho_r = j as f64 / steps as f64;
            let loss_db = 20.0 * mismatch_loss(rho_t, rho_r).log10();
            rows.push(AggregateRow {
                params: vec![("rho_t", fmt(rho_t)), ("rho_r", fmt(rho_r))],
                quantity: "loss_db",
                value: loss_db,
                ci_low: loss_db,
                ci_high: loss_db,
                n_trials: 1,
            });
        }
    }
    Ok(ExperimentOutput {
        aggregates: rows,
        raw: Vec::new(),
    })
}

// -------------------------------------------------------- detect prob --

fn detect_prob_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let kind = cfg.basis_kind()?;
    let q = cfg.q_list[0];
    let kappa_step = (cfg.kappa_t / 6).max(1);
    let kappas: Vec<usize> = (0..=cfg.kappa_t).step_by(kappa_step).collect();
    let mut rows = Vec::new();
    let mut raw = Vec::new();
    for &ep_db in &cfg.ep_over_n0_db {
        let p = channel(cfg, ep_db);
        for &kappa in &kappas {
            let geom = build_pairwise(
                cfg.n,
                cfg.k0,
                kappa,
                kappa,
                cfg.eps_r.min(kappa),
                kind,
                cfg.seed,
            )?;
            let (_, gamma_unc) = snr_with_uncertainty(&p, &geom);
            let p_t = projector_from_basis(geom.tx_basis());
            let book_r = waveform_book(&projector_from_basis(geom.rx_basis()));
            let n = cfg.n;
            let hits = run_trials(cfg.trials, |t| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed ^ 0x51b0, t));
                let col = rng.random_range(0..n);
                let Ok(w) = design_waveform(&p_t, col) else {
                    return (t, false);
                };
                let frames = simulate_received(&geom, &p, q, &w, trial_seed(cfg.seed, t));
                let detected = detect_waveform(&frames, &book_r, geom.rx_basis(), 1e-3)
                    .map(|d| d == col)
                    .unwrap_or(false);
                (t, detected)
            });
            let params = |t: Option<u64>| {
                let mut v = vec![
                    ("ep_over_n0_db", fmt(ep_db)),
                    ("kappa", kappa.to_string()),
                    ("gamma_unc_db", fmt(10.0 * gamma_unc.log10())),
                ];
                if let Some(t) = t {
                    v.push(("trial", t.to_string()));
                }
                v
            };
            let wins = hits.iter().filter(|(_, h)| *h).count() as u64;
            let (lo, hi) = wilson_interval(wins, cfg.trials as u64, 1.96);
            rows.push(AggregateRow {
                params: params(None),
                quantity: "p_detect",
                value: wins as f64 / cfg.trials as f64,
                ci_low: lo,
                ci_high: hi,
                n_trials: cfg.trials as u64,
            });
            if cfg.raw_out.is_some() {
                for (t, h) in &hits {
                    raw.push(TrialRecord {
                        experiment: "detect_prob",
                        trial: *t,
                        params: params(Some(*t))[..3].to_vec(),
                        outcomes: vec![("detected", if *h { 1.0 } else { 0.0 })],
                    });
                }
            }
        }
    }
    Ok(ExperimentOutput {
        aggregates: rows,
        raw,
    })
}

// ---------------------------------------------------- receiver ROC ----

/// Per-trial pooled counters for detection scoring.
#[derive(Debug, Clone, Copy, Default)]
struct RocCounts {
    eff_detected: u64,
    eff_total: u64,
    exc_selected: u64,
    exc_total: u64,
}

fn rx_roc_experiment(cfg: &ExperimentConfig, which: Experiment) -> Result<ExperimentOutput> {
    let kind = cfg.basis_kind()?;
    let geom = build_pairwise(
        cfg.n, cfg.k0, cfg.kappa_t, cfg.kappa_r, cfg.eps_r, kind, cfg.seed,
    )?;
    let p_t = projector_from_basis(geom.tx_basis());
    let (n_star, _) = select_column(&p_t, TIE_TOL)?;
    let w = design_waveform(&p_t, n_star)?;

    let mut records = Vec::new();
    for &ep_db in &cfg.ep_over_n0_db {
        let p = channel(cfg, ep_db);
        for &q in &cfg.q_list {
            for &p_fa in &cfg.p_fa_list {
                let thr = np_threshold(cfg.noise_density / 2.0, q, p_fa)?;
                let counts = run_trials(cfg.trials, |t| {
                    let frames =
                        simulate_received(&geom, &p, q, &w, trial_seed(cfg.seed, t));
                    let sel = identify_dimensions(&frames, geom.rx_basis(), &thr)
                        .expect("frame count matches threshold block length");
                    score_selection(&sel.lambda, geom.k0(), geom.k_hat_r())
                });
                for (t, c) in counts.iter().enumerate() {
                    records.push(TrialRecord {
                        experiment: which.name(),
                        trial: t as u64,
                        params: vec![
                            ("ep_over_n0_db", fmt(ep_db)),
                            ("q", q.to_string()),
                            ("p_fa", fmt(p_fa)),
                        ],
                        outcomes: vec![
                            ("eff_detected", c.eff_detected as f64),
                            ("eff_total", c.eff_total as f64),
                            ("exc_selected", c.exc_selected as f64),
                            ("exc_total", c.exc_total as f64),
                        ],
                    });
                }
            }
        }
    }
    let aggregates = aggregate_roc(&records)?;
    Ok(ExperimentOutput {
        aggregates,
        raw: if cfg.raw_out.is_some() {
            records
        } else {
            Vec::new()
        },
    })
}

fn score_selection(lambda: &[bool], k0: usize, dims: usize) -> RocCounts {
    let mut c = RocCounts::default();
    for (nu, &on) in lambda.iter().enumerate().take(dims) {
        if nu < k0 {
            c.eff_total += 1;
            if on {
                c.eff_detected += 1;
            }
        } else {
            c.exc_total += 1;
            if on {
                c.exc_selected += 1;
            }
        }
    }
    c
}

/// Pools detection counters per parameter tuple into empirical
/// (P_D, P_MD, P_FA) rates with Wilson 95% intervals.
pub fn aggregate_roc(records: &[TrialRecord]) -> Result<Vec<AggregateRow>> {
    if records.is_empty() {
        return Err(Error::ConfigInvalid("no records to aggregate".into()));
    }
    let mut groups: BTreeMap<Vec<(&'static str, String)>, (RocCounts, u64)> = BTreeMap::new();
    for r in records {
        let entry = groups.entry(r.params.clone()).or_default();
        let get = |key: &str| -> u64 {
            r.outcomes
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v as u64)
                .unwrap_or(0)
        };
        entry.0.eff_detected += get("eff_detected");
        entry.0.eff_total += get("eff_total");
        entry.0.exc_selected += get("exc_selected");
        entry.0.exc_total += get("exc_total");
        entry.1 += 1;
    }
    let mut rows = Vec::new();
    for (params, (c, n_trials)) in groups {
        let (d_lo, d_hi) = wilson_interval(c.eff_detected, c.eff_total, 1.96);
        let p_d = c.eff_detected as f64 / c.eff_total.max(1) as f64;
        rows.push(AggregateRow {
            params: params.clone(),
            quantity: "p_d",
            value: p_d,
            ci_low: d_lo,
            ci_high: d_hi,
            n_trials,
        });
        rows.push(AggregateRow {
            params: params.clone(),
            quantity: "p_md",
            value: 1.0 - p_d,
            ci_low: 1.0 - d_hi,
            ci_high: 1.0 - d_lo,
            n_trials,
        });
        if c.exc_total > 0 {
            let (f_lo, f_hi) = wilson_interval(c.exc_selected, c.exc_total, 1.96);
            rows.push(AggregateRow {
                params,
                quantity: "p_fa_emp",
                value: c.exc_selected as f64 / c.exc_total as f64,
                ci_low: f_lo,
                ci_high: f_hi,
                n_trials,
            });
        }
    }
    Ok(rows)
}

// ------------------------------------------------- concurrence suite --

/// Output of one concurrence trial (both schemes, shared receiver pass).
#[derive(Debug, Clone, Copy)]
struct ConcurrenceTrial {
    noncoop: RocCounts,
    coop: RocCounts,
    dof_noncoop: f64,
    dof_coop: f64,
    chordal_noncoop: f64,
    chordal_coop: f64,
}

/// One full trial of the concurrence pipeline.
///
/// Forward link: the transmitter sends its designed waveform; the receiver
/// identifies its active dimensions. Noncooperative: the receiver then
/// transmits its composite filter over the reverse link and the
/// transmitter thresholds its own dimensions. Cooperative: the receiver's
/// feedback message (through the wire codec) drives the transmitter's
/// ℓ₁ recovery. Both schemes are scored against the shared subspace.
fn concurrence_trial(
    geom: &MismatchGeometry,
    p: &ChannelParams,
    q: usize,
    p_fa: f64,
    w_forward: &crate::signaling::Waveform,
    tx_dict: &SingletonDictionary,
    seed: u64,
) -> ConcurrenceTrial {
    let thr = np_threshold(p.noise_density / 2.0, q, p_fa).expect("validated config");

    // Receiver-side identification on the forward link.
    let forward = simulate_received(geom, p, q, w_forward, seed);
    let sel_r = identify_dimensions(&forward, geom.rx_basis(), &thr)
        .expect("frame count matches block length");

    // Noncooperative: reverse link carrying the receiver's composite
    // filter (normalized; silent when the receiver found nothing).
    let reversed = geom.reversed();
    let reverse_frames = if sel_r.k0_hat > 0 {
        let p_mod = projector_from_basis(
            &geom
                .rx_basis()
                .select(&sel_r.active().collect::<Vec<_>>()),
        );
        let alpha = sel_r.alpha.unwrap_or(0);
        match design_waveform(&p_mod, alpha) {
            Ok(w_rev) => simulate_received(&reversed, p, q, &w_rev, seed ^ 0x9e3779b97f4a7c15),
            Err(_) => silent_frames(&reversed, p, q, seed ^ 0x9e3779b97f4a7c15),
        }
    } else {
        silent_frames(&reversed, p, q, seed ^ 0x9e3779b97f4a7c15)
    };
    let sel_t_nc = noncoop_concur(&reverse_frames, geom.tx_basis(), &thr)
        .expect("frame count matches block length");

    // Cooperative: feedback message through the byte codec.
    let phi_r = composite_filter(geom.rx_basis(), &sel_r);
    let f = build_feedback(&sel_r, &phi_r);
    let f = FeedbackMessage::decode(&f.encode()).expect("codec round-trips");
    let sel_t_c = coop_concur(&f, tx_dict, 4000, -1.0).expect("restricted solve converges");

    let score_tx = |sel: &TxSelection| -> RocCounts {
        let mut c = RocCounts::default();
        for (i, &on) in sel.pi.iter().enumerate() {
            if i < geom.k0() {
                c.eff_total += 1;
                if on {
                    c.eff_detected += 1;
                }
            } else {
                c.exc_total += 1;
                if on {
                    c.exc_selected += 1;
                }
            }
        }
        c
    };
    let nc = score_tx(&sel_t_nc);
    let cc = score_tx(&sel_t_c);
    ConcurrenceTrial {
        noncoop: nc,
        coop: cc,
        dof_noncoop: nc.eff_detected as f64,
        dof_coop: cc.eff_detected as f64,
        chordal_noncoop: normalized_consensus_distance(
            &sel_t_nc,
            &sel_r,
            geom.tx_basis(),
            geom.rx_basis(),
        )
        .expect("same ambient dimension"),
        chordal_coop: normalized_consensus_distance(
            &sel_t_c,
            &sel_r,
            geom.tx_basis(),
            geom.rx_basis(),
        )
        .expect("same ambient dimension"),
    }
}

fn silent_frames(
    geom: &MismatchGeometry,
    p: &ChannelParams,
    q: usize,
    seed: u64,
) -> Vec<crate::end_to_end::DofObservation> {
    let mut quiet = *p;
    quiet.gain = 0.0;
    let w = basis_waveform(geom.shared_basis(), 0);
    simulate_received(geom, &quiet, q, &w, seed)
}

fn concurrence_experiment(
    cfg: &ExperimentConfig,
    which: Experiment,
) -> Result<ExperimentOutput> {
    let kind = cfg.basis_kind()?;
    let geom = build_pairwise(
        cfg.n, cfg.k0, cfg.kappa_t, cfg.kappa_r, cfg.eps_r, kind, cfg.seed,
    )?;
    let p_t = projector_from_basis(geom.tx_basis());
    let (n_star, _) = select_column(&p_t, TIE_TOL)?;
    let w_forward = design_waveform(&p_t, n_star)?;
    let tx_dict = SingletonDictionary::new(geom.tx_basis().clone());

    let mut rows = Vec::new();
    let mut raw = Vec::new();
    for &ep_db in &cfg.ep_over_n0_db {
        let p = channel(cfg, ep_db);
        for &q in &cfg.q_list {
            for &p_fa in &cfg.p_fa_list {
                let trials = run_trials(cfg.trials, |t| {
                    concurrence_trial(
                        &geom,
                        &p,
                        q,
                        p_fa,
                        &w_forward,
                        &tx_dict,
                        trial_seed(cfg.seed, t),
                    )
                });
                let params = vec![
                    ("ep_over_n0_db", fmt(ep_db)),
                    ("q", q.to_string()),
                    ("p_fa", fmt(p_fa)),
                ];
                emit_concurrence_rows(which, &params, &trials, &mut rows);
                if cfg.raw_out.is_some() {
                    for (t, tr) in trials.iter().enumerate() {
                        raw.push(TrialRecord {
                            experiment: which.name(),
                            trial: t as u64,
                            params: params.clone(),
                            outcomes: vec![
                                ("noncoop_eff_detected", tr.noncoop.eff_detected as f64),
                                ("noncoop_exc_selected", tr.noncoop.exc_selected as f64),
                                ("coop_eff_detected", tr.coop.eff_detected as f64),
                                ("coop_exc_selected", tr.coop.exc_selected as f64),
                                ("chordal_noncoop", tr.chordal_noncoop),
                                ("chordal_coop", tr.chordal_coop),
                            ],
                        });
                    }
                }
            }
        }
    }
    Ok(ExperimentOutput {
        aggregates: rows,
        raw,
    })
}

fn emit_concurrence_rows(
    which: Experiment,
    params: &[(&'static str, String)],
    trials: &[ConcurrenceTrial],
    rows: &mut Vec<AggregateRow>,
) {
    let n_trials = trials.len() as u64;
    let pooled = |get: &dyn Fn(&ConcurrenceTrial) -> RocCounts| -> RocCounts {
        let mut acc = RocCounts::default();
        for t in trials {
            let c = get(t);
            acc.eff_detected += c.eff_detected;
            acc.eff_total += c.eff_total;
            acc.exc_selected += c.exc_selected;
            acc.exc_total += c.exc_total;
        }
        acc
    };
    let mut push_rates = |scheme: &str, c: RocCounts| {
        let p_d = c.eff_detected as f64 / c.eff_total.max(1) as f64;
        let (d_lo, d_hi) = wilson_interval(c.eff_detected, c.eff_total, 1.96);
        let (f_lo, f_hi) = wilson_interval(c.exc_selected, c.exc_total.max(1), 1.96);
        let mut with_scheme = params.to_vec();
        with_scheme.push(("scheme", scheme.to_string()));
        rows.push(AggregateRow {
            params: with_scheme.clone(),
            quantity: "p_md",
            value: 1.0 - p_d,
            ci_low: 1.0 - d_hi,
            ci_high: 1.0 - d_lo,
            n_trials,
        });
        rows.push(AggregateRow {
            params: with_scheme,
            quantity: "p_fa_emp",
            value: c.exc_selected as f64 / c.exc_total.max(1) as f64,
            ci_low: f_lo,
            ci_high: f_hi,
            n_trials,
        });
    };
    match which {
        Experiment::CrocNoncoop => {
            push_rates("noncoop", pooled(&|t| t.noncoop));
        }
        Experiment::CrocCoop => {
            push_rates("coop", pooled(&|t| t.coop));
        }
        Experiment::DofCountTx | Experiment::Chordal => {
            push_rates("noncoop", pooled(&|t| t.noncoop));
            push_rates("coop", pooled(&|t| t.coop));
            for name in ["dof_noncoop", "dof_coop", "chordal_noncoop", "chordal_coop"] {
                let values: Vec<f64> = trials
                    .iter()
                    .map(|t| match name {
                        "dof_noncoop" => t.dof_noncoop,
                        "dof_coop" => t.dof_coop,
                        "chordal_noncoop" => t.chordal_noncoop,
                        _ => t.chordal_coop,
                    })
                    .collect();
                let (mean, lo, hi) = mean_interval(&values);
                rows.push(AggregateRow {
                    params: params.to_vec(),
                    quantity: name,
                    value: mean,
                    ci_low: lo,
                    ci_high: hi,
                    n_trials,
                });
            }
        }
        _ => unreachable!("not a concurrence experiment"),
    }
}

// ------------------------------------------------------------- CSV ----

fn write_aggregate_csv(path: &str, rows: &[AggregateRow]) -> Result<()> {
    let mut out = Vec::new();
    if let Some(first) = rows.first() {
        let mut header: Vec<&str> = first.params.iter().map(|(k, _)| *k).collect();
        header.extend(["quantity", "metric", "ci_low", "ci_high", "n_trials"]);
        writeln!(out, "{}", header.join(","))?;
        for row in rows {
            let mut fields: Vec<String> = row.params.iter().map(|(_, v)| v.clone()).collect();
            fields.push(row.quantity.to_string());
            fields.push(fmt(row.value));
            fields.push(fmt(row.ci_low));
            fields.push(fmt(row.ci_high));
            fields.push(row.n_trials.to_string());
            writeln!(out, "{}", fields.join(","))?;
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_raw_csv(path: &str, records: &[TrialRecord]) -> Result<()> {
    let mut out = Vec::new();
    if let Some(first) = records.first() {
        let mut header: Vec<&str> = vec!["experiment", "trial"];
        header.extend(first.params.iter().map(|(k, _)| *k));
        header.extend(["outcome", "value"]);
        writeln!(out, "{}", header.join(","))?;
        for r in records {
            for (name, value) in &r.outcomes {
                let mut fields = vec![r.experiment.to_string(), r.trial.to_string()];
                fields.extend(r.params.iter().map(|(_, v)| v.clone()));
                fields.push(name.to_string());
                fields.push(fmt(*value));
                writeln!(out, "{}", fields.join(","))?;
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
