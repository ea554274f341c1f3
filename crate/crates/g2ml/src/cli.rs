//! The `g2ml` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use g2ml_core::dataset::{features, ClassScheme, Dataset, Features, Metadata};
use g2ml_core::enumerate::{count_bound_general, count_sextic_f, Enumeration};
use g2ml_core::ml::{adjusted_rand_index, evaluate, matched_accuracy, train_test_split_indices, FeatureMatrix};
use g2ml_core::wproj::WeightSystem;
use serde_json::json;

use crate::config::RunConfig;
use crate::models::{KnnModel, Model, ModelFile};
use crate::{io, par, plot, report, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "g2ml", version, about = "Moduli points of genus 2 curves: counting, enumeration, loci, datasets and learning")]
pub struct Cli {
    /// `key = value` settings file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0: one per core). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct HeightArgs {
    /// Height bound, an integer or a fraction like 3/2.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, action = ArgAction::Set)]
    pub strict: Option<bool>,
    /// Largest number of candidates to examine.
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of points of bounded height.
    Count {
        #[arg(long, default_value = "1,2,3,5", value_delimiter = ',')]
        weights: Vec<u32>,
        #[arg(long)]
        h: u64,
    },
    /// All moduli points of bounded height, as JSON lines.
    Enumerate(HeightArgs),
    /// All moduli points of bounded height on the locus `J30 = 0`.
    #[command(name = "scan-l2")]
    ScanL2(HeightArgs),
    /// Generate points on a locus.
    Gen {
        locus: Locus,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Dataset(DatasetCmd),
    #[command(subcommand)]
    Ml(MlCmd),
    #[command(subcommand)]
    Report(ReportCmd),
    /// SVG scatter of a dataset in signed-log absolute invariants.
    Plot {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Locus {
    L2,
    L3,
    L5,
}

#[derive(Debug, Subcommand)]
pub enum DatasetCmd {
    /// Generate the labelled dataset.
    Build {
        #[arg(long)]
        l2: Option<usize>,
        #[arg(long)]
        l3: Option<usize>,
        #[arg(long)]
        l5: Option<usize>,
        #[arg(long)]
        other: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge datasets; records with the same key are combined.
    Merge {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every derivable field and report disagreements.
    Audit { input: PathBuf },
    /// Feature rows as CSV.
    Features {
        input: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Classifier {
    Knn,
    Forest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Clusterer {
    Kmeans,
    Gmm,
}

#[derive(Debug, Args)]
pub struct MlArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub split: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum MlCmd {
    /// Train a classifier on the training part of a stratified split.
    Train {
        #[command(flatten)]
        common: MlArgs,
        #[arg(long, value_enum)]
        model: Classifier,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        metric: Option<String>,
        #[arg(long)]
        trees: Option<usize>,
    },
    /// Evaluate a trained classifier on the test part of its split.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster all feature rows and compare with the labels.
    Cluster {
        #[command(flatten)]
        common: MlArgs,
        #[arg(long, value_enum, default_value = "gmm")]
        method: Clusterer,
        #[arg(long)]
        clusters: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReportCmd {
    /// Re-derive the reference tables and print a verdict for each.
    Tables {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Ctx<'a> {
    cfg: RunConfig,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, out: Option<&Path>, text: &str) -> Result<()> {
        match out {
            Some(p) => io::write_atomic(p, text.as_bytes()),
            None => self.stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
        }
    }

    fn say(&mut self, text: &str) -> Result<()> {
        writeln!(self.stdout, "{text}").map_err(|e| Error::io("<stdout>", e))
    }

    fn pool<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        par::with_pool(self.cfg.threads, f)?
    }

    fn metadata(&self) -> Metadata {
        let mut m = Metadata::new(Some(self.cfg.seed));
        m.config = self.cfg.to_pairs();
        m
    }
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Builds the run configuration from defaults, `--config` and flags.
fn configure(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &cli.config {
        cfg.apply_file(&io::read_file(p)?)?;
    }
    let mut set = |k: &str, v: Option<String>| -> Result<()> {
        match v {
            Some(v) => cfg.set(k, &v),
            None => Ok(()),
        }
    };
    set("seed", cli.seed.map(|x| x.to_string()))?;
    set("threads", cli.threads.map(|x| x.to_string()))?;
    match &cli.command {
        Command::Enumerate(a) | Command::ScanL2(a) => {
            set("h", a.h.clone())?;
            set("strict", a.strict.map(|x| x.to_string()))?;
            set("budget", a.budget.map(|x| x.to_string()))?;
        }
        Command::Gen { locus, n, .. } => {
            let key = match locus {
                Locus::L2 => "l2",
                Locus::L3 => "l3",
                Locus::L5 => "l5",
            };
            for other in ["l2", "l3", "l5", "other"] {
                if other != key {
                    set(other, Some("0".into()))?;
                }
            }
            set(key, n.map(|x| x.to_string()))?;
        }
        Command::Dataset(DatasetCmd::Build { l2, l3, l5, other, .. }) => {
            set("l2", l2.map(|x| x.to_string()))?;
            set("l3", l3.map(|x| x.to_string()))?;
            set("l5", l5.map(|x| x.to_string()))?;
            set("other", other.map(|x| x.to_string()))?;
        }
        Command::Dataset(DatasetCmd::Features { scheme, .. }) | Command::Plot { scheme, .. } => {
            set("scheme", scheme.clone())?;
        }
        Command::Ml(MlCmd::Train { common, k, metric, trees, .. }) => {
            set("scheme", common.scheme.clone())?;
            set("split", common.split.map(|x| x.to_string()))?;
            set("k", k.map(|x| x.to_string()))?;
            set("metric", metric.clone())?;
            set("n_trees", trees.map(|x| x.to_string()))?;
        }
        Command::Ml(MlCmd::Cluster { common, clusters, .. }) => {
            set("scheme", common.scheme.clone())?;
            set("split", common.split.map(|x| x.to_string()))?;
            set("clusters", clusters.map(|x| x.to_string()))?;
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn features_csv(f: &Features, names: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["J2", "J4", "J6", "J10", "class"])?;
    for (r, &c) in f.rows.iter().zip(&f.labels) {
        let mut rec: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        rec.push(names[c].to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Unit-normalized feature matrix of a dataset under a class scheme.
pub fn feature_matrix(d: &Dataset, scheme: ClassScheme) -> Result<(FeatureMatrix, usize)> {
    let f = features(d, scheme);
    let fm = FeatureMatrix::new(f.rows, Some(f.labels))?.normalized()?;
    Ok((fm, f.excluded))
}

fn enumeration_out(ctx: &mut Ctx, e: &Enumeration, out: Option<&Path>) -> Result<()> {
    ctx.emit(out, &io::points_to_string(&e.tuples)?)?;
    let summary = json!({ "report": e.report, "config": ctx.cfg.to_pairs() });
    match out {
        Some(p) => io::write_atomic(&sidecar(p, ".count_report.json"), format!("{summary:#}\n").as_bytes()),
        None => Ok(()),
    }
}

fn run_command(cli: &Cli, ctx: &mut Ctx) -> Result<()> {
    match &cli.command {
        Command::Count { weights, h } => {
            let w = WeightSystem::new(weights.clone())?;
            let n = if w.weights() == [1, 2, 3, 5] { count_sextic_f(*h) } else { count_bound_general(&w, *h).into() };
            ctx.say(&n.to_string())
        }
        Command::Enumerate(a) => {
            let (h, strict, budget) = (ctx.cfg.h.clone(), ctx.cfg.strict, ctx.cfg.budget);
            let e = ctx.pool(|| par::enumerate_par(&h, strict, budget))?;
            enumeration_out(ctx, &e, a.out.as_deref())
        }
        Command::ScanL2(a) => {
            let (h, strict, budget) = (ctx.cfg.h.clone(), ctx.cfg.strict, ctx.cfg.budget);
            let e = ctx.pool(|| par::scan_l2_par(&h, strict, budget))?;
            enumeration_out(ctx, &e, a.out.as_deref())
        }
        Command::Gen { out, .. } | Command::Dataset(DatasetCmd::Build { out, .. }) => {
            let (gc, seed) = (ctx.cfg.gen_config(), ctx.cfg.seed);
            let mut d = ctx.pool(|| par::generate_par(&gc, seed))?;
            d.meta = ctx.metadata();
            ctx.emit(out.as_deref(), &io::dataset_to_string(&d)?)
        }
        Command::Dataset(DatasetCmd::Merge { inputs, out }) => {
            let mut acc = io::read_dataset(&inputs[0])?;
            for p in &inputs[1..] {
                acc = acc.merge(&io::read_dataset(p)?)?;
            }
            ctx.emit(out.as_deref(), &io::dataset_to_string(&acc)?)
        }
        Command::Dataset(DatasetCmd::Audit { input }) => {
            let a = io::read_dataset(input)?.audit();
            ctx.say(&serde_json::to_string_pretty(&a)?)?;
            if a.is_clean() {
                Ok(())
            } else {
                Err(Error::Check(format!("{} mismatched fields", a.mismatches.len())))
            }
        }
        Command::Dataset(DatasetCmd::Features { input, out, .. }) => {
            let d = io::read_dataset(input)?;
            let scheme = ctx.cfg.scheme;
            let f = features(&d, scheme);
            let excluded = f.excluded;
            ctx.emit(out.as_deref(), &features_csv(&f, scheme.names())?)?;
            if let Some(p) = out {
                let meta = json!({ "rows": f.rows.len(), "excluded": excluded, "config": ctx.cfg.to_pairs() });
                io::write_atomic(&sidecar(p, ".meta.json"), format!("{meta:#}\n").as_bytes())?;
            }
            eprintln!("{} rows, {excluded} records excluded as undecided", f.rows.len());
            Ok(())
        }
        Command::Ml(cmd) => run_ml(cmd, ctx),
        Command::Report(ReportCmd::Tables { out }) => {
            let checks = ctx.pool(report::all_tables)?;
            for c in &checks {
                ctx.say(&c.to_string())?;
            }
            if let Some(p) = out {
                let doc = json!({ "tables": checks, "config": ctx.cfg.to_pairs() });
                io::write_atomic(p, format!("{doc:#}\n").as_bytes())?;
            }
            let failed: Vec<String> =
                checks.iter().filter(|c| c.verdict == report::Verdict::Fail).map(|c| c.table.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Error::Check(format!("tables failing: {}", failed.join(", "))))
            }
        }
        Command::Plot { data, out, .. } => {
            let d = io::read_dataset(data)?;
            let pts = plot::plot_points(&d, ctx.cfg.scheme);
            let note = ctx.cfg.to_pairs().iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
            let svg = plot::render_svg(&pts, ctx.cfg.scheme.names(), &note);
            ctx.emit(out.as_deref(), &svg)
        }
    }
}

fn split(fm: &FeatureMatrix, cfg: &RunConfig) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let (tr, te) = train_test_split_indices(fm.labels()?, cfg.split, cfg.seed)?;
    Ok((fm.select(&tr), fm.select(&te)))
}

fn run_ml(cmd: &MlCmd, ctx: &mut Ctx) -> Result<()> {
    match cmd {
        MlCmd::Train { common, model, .. } => {
            let cfg = ctx.cfg.clone();
            let (fm, _) = feature_matrix(&io::read_dataset(&common.data)?, cfg.scheme)?;
            let (train, _) = split(&fm, &cfg)?;
            let m = match model {
                Classifier::Knn => Model::Knn(KnnModel { k: cfg.k, metric: cfg.metric, train }),
                Classifier::Forest => Model::Forest(ctx.pool(|| par::forest_par(&train, &cfg.forest_config(), cfg.seed))?),
            };
            let file = ModelFile::new(m, cfg.scheme, cfg.to_pairs());
            ctx.emit(common.out.as_deref(), &file.to_json()?)
        }
        MlCmd::Eval { data, model, out } => {
            let file = ModelFile::from_json(&io::read_file(model)?)?;
            let cfg = RunConfig::from_pairs(&file.config)?;
            let (fm, _) = feature_matrix(&io::read_dataset(data)?, file.scheme)?;
            let (_, test) = split(&fm, &cfg)?;
            let pred = ctx.pool(|| match &file.model {
                Model::Knn(k) => par::knn_par(&k.train, &test.rows, k.k, k.metric),
                Model::Forest(f) => Ok(par::forest_predict_par(f, &test.rows)),
                m => Err(Error::Usage(format!("{} models are not classifiers", m.kind()))),
            })?;
            let (cm, rep) = evaluate(&pred, test.labels()?)?;
            let names = file.scheme.names();
            ctx.say(&rep.to_table(names))?;
            let doc = json!({ "model": file.model.kind(), "confusion": cm.counts, "report": rep, "config": file.config });
            match out {
                Some(p) => io::write_atomic(p, format!("{doc:#}\n").as_bytes()),
                None => Ok(()),
            }
        }
        MlCmd::Cluster { common, method, .. } => {
            let cfg = ctx.cfg.clone();
            let (fm, _) = feature_matrix(&io::read_dataset(&common.data)?, cfg.scheme)?;
            let (model, clusters) = match method {
                Clusterer::Kmeans => {
                    let m = ctx.pool(|| par::kmeans_par(&fm.rows, &cfg.kmeans_config(), cfg.seed))?;
                    let c = m.predict(&fm.rows);
                    (Model::Kmeans(m), c)
                }
                Clusterer::Gmm => {
                    let m = ctx.pool(|| par::gmm_par(&fm.rows, &cfg.gmm_config(), cfg.seed))?;
                    let c = m.predict(&fm.rows);
                    (Model::Gmm(m), c)
                }
            };
            let truth = fm.labels()?;
            let ari = adjusted_rand_index(&clusters, truth)?;
            let acc = matched_accuracy(&clusters, truth)?;
            ctx.say(&format!("{}", json!({ "method": model.kind(), "ari": ari, "matchedAccuracy": acc, "rows": fm.len() })))?;
            match &common.out {
                Some(p) => io::write_atomic(p, ModelFile::new(model, cfg.scheme, cfg.to_pairs()).to_json()?.as_bytes()),
                None => Ok(()),
            }
        }
    }
}

/// Runs the tool on `argv` and returns the exit status. Errors go to
/// stderr as one JSON object.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = Error::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    let res = configure(&cli).and_then(|cfg| run_command(&cli, &mut Ctx { cfg, stdout }));
    match res {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
