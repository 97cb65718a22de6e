use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use log::info;

use mfdfa_core::export::{
    read_features_csv, write_curves, write_features_csv, write_json, write_ranking_csv, write_reports_csv,
    CurveData, FeatureRecord,
};
use mfdfa_core::ingest::{
    load_bonn_signal, set_directory, warn_unusual_lengths, signal_files, BonnSet, BonnSetId, ProblemId,
};
use mfdfa_core::pipeline::{analyze_dataset, analyze_signals, problem_dataset, run_problem, PipelineConfig};
use mfdfa_core::stats::rank_features;
use mfdfa_core::synth::{gen_binomial_cascade, gen_fgn, gen_white_noise, CascadeSpec};
use mfdfa_core::{mfdfa, Error, FeatureVector, TimeSeries};

use crate::args::{AnalyzeArgs, Command, FeaturesArgs, ProblemArgs, SynthArgs, SynthKind};
use crate::manifest::InputLog;
use crate::CliError;

type Features = BTreeMap<BonnSetId, Vec<FeatureVector>>;

pub fn execute(command: &Command, config: &PipelineConfig, out: &Path, log: &mut InputLog) -> Result<(), CliError> {
    match command {
        Command::Analyze(a) => analyze(a, config, out, log),
        Command::Features(a) => features(a, config, out, log),
        Command::Rank(a) => rank(a, config, out, log),
        Command::Run(a) => run(a, config, out, log),
        Command::Synth(a) => synth(a, config, out),
        Command::Replay(_) => Err(CliError::Usage("a manifest cannot record a replay".into())),
    }
}

fn dataset_root(config: &PipelineConfig) -> Result<&Path, CliError> {
    config.dataset_root.as_deref().ok_or_else(|| {
        CliError::Usage(format!(
            "no dataset root; pass --dataset-root or set {}",
            mfdfa_core::ingest::BONN_DATASET_ENV
        ))
    })
}

fn parse_sets(names: &[String]) -> Result<Vec<BonnSetId>, CliError> {
    if names.is_empty() {
        return Ok(BonnSetId::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| BonnSetId::from_name(n.trim()).ok_or_else(|| CliError::Usage(format!("unknown set {n:?}"))))
        .collect()
}

fn parse_problems(names: &[String]) -> Result<Vec<ProblemId>, CliError> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(ProblemId::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| n.parse::<ProblemId>().map_err(|_| CliError::Usage(format!("unknown problem {n:?}"))))
        .collect()
}

fn load_signals(files: &[PathBuf], log: &mut InputLog) -> Result<Vec<TimeSeries>, CliError> {
    files
        .iter()
        .map(|f| {
            log.record(f)?;
            Ok(load_bonn_signal(f)?)
        })
        .collect()
}

/// Loads the requested sets that exist under the root; requested sets that
/// are absent are skipped when `required` is false.
fn load_sets(
    config: &PipelineConfig,
    wanted: &[BonnSetId],
    required: bool,
    log: &mut InputLog,
) -> Result<BTreeMap<BonnSetId, BonnSet>, CliError> {
    let root = dataset_root(config)?;
    if !root.is_dir() {
        return Err(Error::NoSignals(root.to_path_buf()).into());
    }
    let mut sets = BTreeMap::new();
    for &id in wanted {
        let Some(dir) = set_directory(root, id)? else {
            if required {
                return Err(Error::MissingSet(id.letter()).into());
            }
            continue;
        };
        let files = signal_files(&dir)?;
        if files.is_empty() {
            return Err(Error::NoSignals(dir).into());
        }
        let signals = load_signals(&files, log)?
            .into_iter()
            .map(|s| s.with_label(id.letter().to_string()))
            .collect::<Vec<_>>();
        warn_unusual_lengths(id, &signals);
        sets.insert(id, BonnSet { id, signals });
    }
    if sets.is_empty() {
        return Err(Error::NoSignals(root.to_path_buf()).into());
    }
    Ok(sets)
}

fn analyze(args: &AnalyzeArgs, config: &PipelineConfig, out: &Path, log: &mut InputLog) -> Result<(), CliError> {
    let mfdfa_config = config.mfdfa_config()?;
    let mut inputs: Vec<(String, PathBuf)> = Vec::new();
    if args.inputs.is_empty() {
        let root = dataset_root(config)?;
        for id in BonnSetId::ALL {
            if let Some(dir) = set_directory(root, id)? {
                inputs.push((id.to_string(), dir));
            }
        }
        if inputs.is_empty() {
            return Err(Error::NoSignals(root.to_path_buf()).into());
        }
    } else {
        for p in &args.inputs {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".into());
            inputs.push((name, p.clone()));
        }
    }
    let curves_dir = out.join("curves");
    for (name, path) in inputs {
        if path.is_dir() {
            let files = signal_files(&path)?;
            if files.is_empty() {
                return Err(Error::NoSignals(path).into());
            }
            let signals = load_signals(&files, log)?;
            let results = analyze_signals(&signals, &mfdfa_config)?;
            let curves: Vec<CurveData> = results.iter().map(CurveData::from_result).collect();
            for c in &curves {
                write_curves(&curves_dir.join(&name).join(&c.signal_id), c)?;
            }
            let mean = CurveData::mean(format!("mean_{name}"), &curves)?;
            write_curves(&curves_dir.join(&name).join("mean"), &mean)?;
            let width = curves.iter().map(CurveData::width).sum::<f64>() / curves.len() as f64;
            println!(
                "{name}: {} signals, mean h(2) = {}, mean width = {width:.4}",
                curves.len(),
                fmt_h2(&mean)
            );
        } else {
            let signals = load_signals(std::slice::from_ref(&path), log)?;
            let result = mfdfa(&signals[0], &mfdfa_config)?;
            let c = CurveData::from_result(&result);
            write_curves(&curves_dir.join(&name), &c)?;
            println!("{name}: h(2) = {}, width = {:.4}", fmt_h2(&c), c.width());
        }
    }
    Ok(())
}

fn fmt_h2(c: &CurveData) -> String {
    c.q_values
        .iter()
        .position(|q| (q - 2.0).abs() < mfdfa_core::mfdfa::Q_MATCH_TOL)
        .and_then(|i| c.h[i])
        .map(|h| format!("{h:.4}"))
        .unwrap_or_else(|| "n/a".into())
}

fn compute_features(
    config: &PipelineConfig,
    wanted: &[BonnSetId],
    required: bool,
    out: &Path,
    log: &mut InputLog,
) -> Result<Features, CliError> {
    let sets = load_sets(config, wanted, required, log)?;
    let analysis = analyze_dataset(&sets, config)?;
    let records: Vec<FeatureRecord> = analysis
        .features
        .iter()
        .flat_map(|(id, fv)| fv.iter().map(move |v| FeatureRecord::new(v, id.to_string())))
        .collect();
    write_features_csv(&out.join("features.csv"), &records)?;
    write_json(&out.join("features.json"), &records)?;
    for (id, c) in &analysis.mean_curves {
        write_curves(&out.join("curves").join(format!("mean_{id}")), c)?;
    }
    write_json(&out.join("set_widths.json"), &analysis.mean_width)?;
    Ok(analysis.features)
}

fn features(args: &FeaturesArgs, config: &PipelineConfig, out: &Path, log: &mut InputLog) -> Result<(), CliError> {
    let wanted = parse_sets(&args.sets)?;
    let features = compute_features(config, &wanted, !args.sets.is_empty(), out, log)?;
    for (id, fv) in &features {
        println!("set {id}: {} feature vectors", fv.len());
    }
    Ok(())
}

fn problem_features(
    args: &ProblemArgs,
    problems: &[ProblemId],
    config: &PipelineConfig,
    out: &Path,
    log: &mut InputLog,
) -> Result<Features, CliError> {
    if let Some(csv) = &args.features {
        log.record(csv)?;
        let mut features = Features::new();
        for (i, r) in read_features_csv(csv)?.into_iter().enumerate() {
            let set = BonnSetId::from_name(&r.label).ok_or_else(|| Error::Parse {
                path: csv.clone(),
                line: i + 2,
                content: format!("label {:?} is not a set", r.label),
            })?;
            features.entry(set).or_default().push(r.to_vector());
        }
        return Ok(features);
    }
    let mut wanted: Vec<BonnSetId> = problems.iter().flat_map(|p| p.problem().sets().collect::<Vec<_>>()).collect();
    wanted.sort();
    wanted.dedup();
    compute_features(config, &wanted, true, out, log)
}

fn rank(args: &ProblemArgs, config: &PipelineConfig, out: &Path, log: &mut InputLog) -> Result<(), CliError> {
    let problems = parse_problems(&args.problems)?;
    let features = problem_features(args, &problems, config, out, log)?;
    for id in problems {
        let data = problem_dataset(id, &features)?;
        let ranked = rank_features(&data)?;
        write_ranking_csv(&out.join(format!("ranking_{id}.csv")), &ranked)?;
        write_json(&out.join(format!("ranking_{id}.json")), &ranked)?;
        let top: Vec<String> = ranked.iter().take(3).map(|r| r.name.clone()).collect();
        println!("problem {id}: top features {}", top.join(", "));
    }
    Ok(())
}

fn run(args: &ProblemArgs, config: &PipelineConfig, out: &Path, log: &mut InputLog) -> Result<(), CliError> {
    config.validate()?;
    let problems = parse_problems(&args.problems)?;
    let features = problem_features(args, &problems, config, out, log)?;
    let mut reports = Vec::new();
    for id in problems {
        info!("running problem {id}");
        let outcome = run_problem(id, &features, config)?;
        write_ranking_csv(&out.join(format!("ranking_{id}.csv")), &outcome.ranking)?;
        write_json(&out.join(format!("ranking_{id}.json")), &outcome.ranking)?;
        write_json(&out.join(format!("report_{id}.json")), &outcome.report)?;
        let m = &outcome.report.metrics;
        println!(
            "problem {id}: accuracy {} sensitivity {} specificity {} with {:?}",
            pct(m.accuracy),
            pct(m.sensitivity),
            pct(m.specificity),
            outcome.report.selected_features
        );
        reports.push(outcome.report);
    }
    write_reports_csv(&out.join("reports.csv"), &reports)?;
    write_json(&out.join("reports.json"), &reports)?;
    Ok(())
}

fn pct(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.2}")).unwrap_or_else(|| "n/a".into())
}

fn synth(args: &SynthArgs, config: &PipelineConfig, out: &Path) -> Result<(), CliError> {
    let series = match args.kind {
        SynthKind::White => gen_white_noise(args.n, config.seed)?,
        SynthKind::Fgn => gen_fgn(args.n, args.hurst, config.seed)?,
        SynthKind::Cascade => gen_binomial_cascade(&CascadeSpec {
            levels: args.levels,
            multiplier_a: args.multiplier,
            seed: (!args.no_shuffle).then_some(config.seed),
        })?,
    };
    let name = match args.kind {
        SynthKind::White => "white",
        SynthKind::Fgn => "fgn",
        SynthKind::Cascade => "cascade",
    };
    let path = args.file.clone().unwrap_or_else(|| out.join(format!("{name}.txt")));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(Error::from)?;
    }
    mfdfa_core::ingest::write_bonn_signal(&path, &series.samples)?;
    println!("wrote {} samples to {}", series.len(), path.display());
    Ok(())
}
