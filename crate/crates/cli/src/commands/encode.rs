use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use pqdtw_core::pq::{load_codebook, write_codes};
use pqdtw_core::EncodedDataset;

use super::load_dataset;

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    /// Series to encode (UCR tab-separated).
    pub input: PathBuf,
    #[arg(long)]
    pub codebook: PathBuf,
    #[arg(short, long, default_value = "codes.csv")]
    pub output: PathBuf,
    /// Keep series as loaded instead of z-normalizing them.
    #[arg(long)]
    pub no_znorm: bool,
}

pub fn run(args: &EncodeArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let cb = load_codebook(&args.codebook)
        .with_context(|| format!("loading codebook {}", args.codebook.display()))?;
    let data = load_dataset(&args.input, !args.no_znorm)?;
    let encoded = EncodedDataset {
        codes: cb
            .encode_all(data.series())
            .with_context(|| format!("encoding {}", args.input.display()))?,
        labels: data.labels().map(<[String]>::to_vec),
    };
    write_codes(&args.output, &encoded).with_context(|| format!("writing {}", args.output.display()))?;
    writeln!(out, "encoded {} series into {}", encoded.len(), args.output.display())?;
    Ok(())
}
