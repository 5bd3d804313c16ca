use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use eventide::bench::compressor_benchmark;
use eventide::report::throughput_table;
use eventide::stream::StreamReader;
use eventide::synth::fixtures;
use eventide::{
    detect, final_events, generate_stream, read_events, read_truth, write_stream, write_truth, DetectSummary,
    DetectionReport, EventsWriter, RayonPool, RunManifest, SyntheticSpec,
};
use eventide_core::{Algorithm, CompressorSpec, Engine, EngineConfig, EventSink, MatchPolicy, Sequential};

const USAGE: u8 = 1;
const IO: u8 = 2;
const REJECTED: u8 = 3;

#[derive(Parser)]
#[command(name = "eventide", version, about = "Single-pass event detection over short-message streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a stream and write promoted and closed events.
    Detect(DetectArgs),
    /// Generate a synthetic stream and its ground truth.
    Synth(SynthArgs),
    /// Score an events file against a ground-truth file.
    Eval(EvalArgs),
    /// Measure compressors on a corpus, or the engine on a stream.
    Bench(BenchArgs),
}

/// Engine parameters. Unset flags keep the base configuration, which is the
/// published defaults unless `--config` names a manifest.
#[derive(Args, Clone)]
struct EngineFlags {
    /// Candidate clusters compared per message [default: 100]
    #[arg(long)]
    cluster_limit: Option<usize>,
    /// Recent members per cluster used for distances [default: 1000]
    #[arg(long)]
    tweet_limit: Option<usize>,
    /// Largest distance at which a message joins a cluster [default: 0.8]
    #[arg(long)]
    distance_threshold: Option<f64>,
    /// User diversity in bits that makes a cluster an event [default: 5.0]
    #[arg(long)]
    diversity_threshold: Option<f64>,
    /// Seconds a cluster without a usable mean gap stays alive [default: 3600]
    #[arg(long)]
    default_timeout: Option<u64>,
    /// Expiry after this many mean gaps of silence [default: 1.0]
    #[arg(long)]
    timeout_multiplier: Option<f64>,
    /// Compressor: deflate-raw, gzip or lz-fast [default: deflate-raw]
    #[arg(long)]
    compressor: Option<String>,
    /// Compressor level [default: 9 for deflate-raw and gzip]
    #[arg(long)]
    compression_level: Option<u8>,
    /// Take the base configuration from a run manifest
    #[arg(long, value_name = "MANIFEST")]
    config: Option<PathBuf>,
}

impl EngineFlags {
    fn resolve(&self) -> Result<EngineConfig, Failure> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
                let manifest: RunManifest = serde_json::from_str(&text)
                    .map_err(|e| Failure::usage(format!("{}: not a run manifest: {e}", path.display())))?;
                manifest.config
            }
            None => EngineConfig::default(),
        };
        if let Some(v) = self.cluster_limit {
            config.cluster_limit = v;
        }
        if let Some(v) = self.tweet_limit {
            config.tweet_limit = v;
        }
        if let Some(v) = self.distance_threshold {
            config.distance_threshold = v;
        }
        if let Some(v) = self.diversity_threshold {
            config.diversity_threshold = v;
        }
        if let Some(v) = self.default_timeout {
            config.default_timeout = v;
        }
        if let Some(v) = self.timeout_multiplier {
            config.timeout_multiplier = v;
        }
        if let Some(name) = &self.compressor {
            let algorithm = Algorithm::from_name(name).ok_or_else(|| Failure::usage(format!("unknown compressor `{name}`")))?;
            config.compressor = CompressorSpec::new(algorithm);
        }
        if let Some(level) = self.compression_level {
            config.compressor.level = level;
        }
        config.validate().map_err(|e| Failure::usage(format!("invalid configuration: {e}")))?;
        Ok(config)
    }
}

#[derive(Args)]
struct DetectArgs {
    /// Stream file, one JSON record per line
    input: PathBuf,
    #[command(flatten)]
    engine: EngineFlags,
    /// Where promotion and closure records go
    #[arg(long, default_value = "events.jsonl")]
    events_out: PathBuf,
    #[arg(long, default_value = "manifest.json")]
    manifest_out: PathBuf,
    /// Recorded in the manifest; detection itself draws no random numbers
    #[arg(long)]
    seed: Option<u64>,
    /// Scoring threads; 1 scores candidates on the calling thread
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct SynthArgs {
    /// JSON spec file
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    spec: Option<PathBuf>,
    /// Built-in spec: easy-1, easy, fan or throughput
    #[arg(long)]
    fixture: Option<String>,
    /// Overrides the spec's seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "stream.jsonl")]
    out: PathBuf,
    #[arg(long, default_value = "truth.txt")]
    truth_out: PathBuf,
    /// Also write single-user decoy bursts in the ground-truth format
    #[arg(long)]
    decoys_out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    events: PathBuf,
    truth: PathBuf,
    /// Minimum member-id Jaccard for a match
    #[arg(long, default_value_t = 0.5)]
    jaccard_min: f64,
    /// Let each planted event match at most one detection
    #[arg(long)]
    one_to_one: bool,
    /// Detect manifest whose counters add throughput figures
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Also write the report as JSON
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Stream file whose texts form the corpus (or the stream to replay)
    corpus: PathBuf,
    /// Compressors to measure; all available ones when omitted
    #[arg(long = "algorithm")]
    algorithms: Vec<String>,
    /// Replay the corpus through the engine and report throughput
    #[arg(long)]
    engine: bool,
    #[command(flatten)]
    engine_flags: EngineFlags,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self {
            code: IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

/// A path that does not exist is the caller's mistake, so it is a usage
/// error; anything else that stops the read is an I/O error.
fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| {
        if e.kind() == io::ErrorKind::NotFound {
            Failure::usage(format!("{}: no such file", path.display()))
        } else {
            Failure::io(path, e)
        }
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::io(path, e))
}

fn unix_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

fn run_engine<R: BufRead, S: EventSink>(
    reader: R,
    input: &Path,
    config: &EngineConfig,
    threads: usize,
    sink: &mut S,
) -> Result<DetectSummary, Failure> {
    let mut engine = Engine::new(config.clone()).map_err(|e| Failure::usage(e.to_string()))?;
    let result = if threads == 1 {
        detect(reader, &mut engine, &Sequential, sink)
    } else {
        let pool = RayonPool::new(threads).map_err(|e| Failure::usage(e.to_string()))?;
        detect(reader, &mut engine, &pool, sink)
    };
    result.map_err(|e| Failure::io(input, e))
}

fn report_rejections(summary: &DetectSummary) -> u8 {
    for d in &summary.diagnostics {
        eprintln!("warning: {d}");
    }
    if summary.read.truncated > 0 {
        eprintln!("warning: {} texts cut to 140 characters", summary.read.truncated);
    }
    if summary.rejected() > 0 {
        eprintln!(
            "completed with {} rejected lines ({} malformed, {} out of order)",
            summary.rejected(),
            summary.read.rejected,
            summary.out_of_order
        );
        REJECTED
    } else {
        0
    }
}

fn cmd_detect(args: DetectArgs) -> Result<u8, Failure> {
    let config = args.engine.resolve()?;
    if args.threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let reader = open(&args.input)?;
    let started = unix_ms();
    let mut writer = EventsWriter::new(create(&args.events_out)?);
    let summary = run_engine(reader, &args.input, &config, args.threads, &mut writer)?;
    let events = writer.written();
    writer.finish().map_err(|e| Failure::io(&args.events_out, e))?;

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "detect".into(),
        config,
        inputs: vec![args.input.display().to_string()],
        seed: args.seed,
        threads: args.threads,
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        summary: summary.clone(),
        outputs: vec![args.events_out.display().to_string(), args.manifest_out.display().to_string()],
    };
    let mut out = create(&args.manifest_out)?;
    writeln!(out, "{}", manifest.to_json())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::io(&args.manifest_out, e))?;
    eprintln!(
        "{} tweets, {} clusters, {} event records written to {}",
        summary.counters.tweets_processed,
        summary.counters.clusters_created,
        events,
        args.events_out.display()
    );
    Ok(report_rejections(&summary))
}

fn cmd_synth(args: SynthArgs) -> Result<u8, Failure> {
    let mut spec: SyntheticSpec = match (&args.spec, &args.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => fixtures::by_name(name, args.seed.unwrap_or(1)).ok_or_else(|| {
            Failure::usage(format!("unknown fixture `{name}`; known: {}", fixtures::NAMES.join(", ")))
        })?,
        (None, None) => return Err(Failure::usage("need --spec or --fixture")),
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let synthetic = generate_stream(&spec).map_err(|e| Failure::usage(format!("invalid spec: {e}")))?;
    write_stream(create(&args.out)?, &synthetic.records).map_err(|e| Failure::io(&args.out, e))?;
    write_truth(create(&args.truth_out)?, &synthetic.truth).map_err(|e| Failure::io(&args.truth_out, e))?;
    if let Some(path) = &args.decoys_out {
        write_truth(create(path)?, &synthetic.decoys).map_err(|e| Failure::io(path, e))?;
    }
    eprintln!(
        "{} records, {} planted events, {} decoys",
        synthetic.records.len(),
        synthetic.truth.events.len(),
        synthetic.decoys.events.len()
    );
    Ok(0)
}

fn cmd_eval(args: EvalArgs) -> Result<u8, Failure> {
    let policy = MatchPolicy {
        jaccard_min: args.jaccard_min,
        allow_many_to_one: !args.one_to_one,
    };
    policy.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let records = read_events(open(&args.events)?).map_err(|e| Failure {
        code: IO,
        message: format!("{}: {e}", args.events.display()),
    })?;
    let truth = read_truth(open(&args.truth)?).map_err(|e| Failure {
        code: IO,
        message: format!("{}: {e}", args.truth.display()),
    })?;
    let detected = final_events(&records);
    let mut report = DetectionReport::evaluate(&detected, &truth, &policy).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(path) = &args.manifest {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        let manifest: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: not a run manifest: {e}", path.display())))?;
        report = report.with_run(&manifest);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", report.to_text());
    if let Some(path) = &args.json_out {
        let mut out = create(path)?;
        serde_json::to_writer_pretty(&mut out, &report)
            .map_err(io::Error::other)
            .and_then(|_| writeln!(out))
            .and_then(|_| out.flush())
            .map_err(|e| Failure::io(path, e))?;
    }
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<u8, Failure> {
    if args.engine {
        let config = args.engine_flags.resolve()?;
        if args.threads == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        let mut sink = Discard;
        let summary = run_engine(open(&args.corpus)?, &args.corpus, &config, args.threads, &mut sink)?;
        let report = summary.throughput(&config).map_err(|e| Failure::usage(e.to_string()))?;
        print!("{}", throughput_table("replay", &report));
        println!(
            "distance calls per tweet: mean {:.2}, max {} (bound {})",
            report.mean_distance_calls, report.max_distance_calls, report.distance_call_bound
        );
        println!("peak active clusters: {}", summary.counters.peak_active_clusters);
        return Ok(report_rejections(&summary));
    }
    let mut corpus = Vec::new();
    let mut reader = StreamReader::new(open(&args.corpus)?);
    for tweet in reader.by_ref() {
        corpus.push(tweet.map_err(|e| Failure::io(&args.corpus, e))?.text().to_string());
    }
    let specs = if args.algorithms.is_empty() {
        Algorithm::ALL.iter().filter(|a| a.is_available()).map(|&a| CompressorSpec::new(a)).collect()
    } else {
        args.algorithms
            .iter()
            .map(|name| {
                let algorithm =
                    Algorithm::from_name(name).ok_or_else(|| Failure::usage(format!("unknown compressor `{name}`")))?;
                let mut spec = CompressorSpec::new(algorithm);
                if let Some(level) = args.engine_flags.compression_level {
                    spec.level = level;
                }
                Ok(spec)
            })
            .collect::<Result<Vec<_>, Failure>>()?
    };
    let report = compressor_benchmark(&corpus, &specs).map_err(|e| Failure::usage(e.to_string()))?;
    print!("{}", report.to_text());
    Ok(0)
}

struct Discard;

impl EventSink for Discard {
    fn emit(&mut self, _: eventide_core::EventRecord) {}
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
