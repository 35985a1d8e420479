use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pqdtw_cli::commands::{bench, cluster, detexify, encode, gridsearch, knn, train};
use pqdtw_cli::service;

#[derive(Debug, Parser)]
#[command(name = "pqdtw", version, about = "Elastic product quantization for time series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a codebook and encode the training set.
    Train(train::TrainArgs),
    /// Encode a dataset with an existing codebook.
    Encode(encode::EncodeArgs),
    /// Top-k classification accuracy and query time.
    Knn(knn::KnnArgs),
    /// Agglomerative clustering with Rand index against the labels.
    Cluster(cluster::ClusterArgs),
    /// Pairwise-matrix timing on seeded random walks.
    BenchRandomwalk(bench::BenchArgs),
    /// Convert stroke records into an angle-series dataset.
    DetexifyPrepare(detexify::PrepareArgs),
    /// Serve a classifier bundle over HTTP.
    Serve(ServeArgs),
    /// Cross-validated grid search over M, t, J and the window.
    Gridsearch(gridsearch::GridArgs),
}

#[derive(Debug, clap::Args)]
struct ServeArgs {
    #[arg(long, env = "PQDTW_MODEL")]
    model: PathBuf,
    #[arg(long, env = "PQDTW_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
}

fn dispatch(cmd: Command, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        Command::Train(a) => train::run(&a, out).map(drop),
        Command::Encode(a) => encode::run(&a, out),
        Command::Knn(a) => knn::run(&a, out).map(drop),
        Command::Cluster(a) => cluster::run(&a, out).map(drop),
        Command::BenchRandomwalk(a) => bench::run(&a, out).map(drop),
        Command::DetexifyPrepare(a) => detexify::run(&a, out).map(drop),
        Command::Gridsearch(a) => gridsearch::run(&a, out).map(drop),
        Command::Serve(a) => {
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            rt.block_on(service::serve(a.model, SocketAddr::new(a.host, a.port)))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
