use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pindex::cert;
use pindex::commands::{self, DatumJson, FormJson, SiegelJson};
use pindex::json::{
    even_from_json, parse_int, parse_rat, rat_matrix_from_json, two_from_json, ClassMap, EvenClassJson, MatrixJson,
};
use pindex_core::evenring::TwoClass;
use pindex_core::tiltstab::StabParams;
use pindex_core::Int;
use serde::de::DeserializeOwned;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "pindex")]
#[command(about = "Exact period-index computations on abelian threefolds")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Run the certificate pipeline
    Pipeline {
        #[arg(long)]
        n: String,
        /// Polarization type d1,d2,d3
        #[arg(long, value_delimiter = ',', default_value = "1,1,1")]
        h_type: Vec<String>,
        /// Residue class as a sparse JSON class; the polarization when omitted
        #[arg(long)]
        theta: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay every check recorded in a certificate
    Verify { cert: PathBuf },
    /// Igusa discriminant of an even class
    Igusa {
        #[arg(long)]
        class: PathBuf,
    },
    /// Characteristic Pfaffian Pf(tH - u)
    CharPf {
        #[arg(long)]
        u: PathBuf,
        #[arg(long = "H")]
        h: PathBuf,
    },
    /// Type, rank and Pfaffian of an integral alternating form
    Type {
        #[arg(long)]
        form: PathBuf,
    },
    /// Cohomological Fourier-Mukai transform of an even class
    Fm {
        #[arg(long)]
        class: PathBuf,
    },
    /// DT coefficients through degree dmax
    DtTable {
        #[arg(long, default_value_t = 60)]
        dmax: usize,
        #[arg(long, default_value = "tsv")]
        format: String,
    },
    /// Positivity verdict for DT_{d,n}
    DtCheck {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Period and Hodge-theoretic index of a datum
    HodgeIndex {
        #[arg(long)]
        datum: PathBuf,
    },
    /// Period of a datum
    Period {
        #[arg(long)]
        datum: PathBuf,
    },
    /// Symbol length of a class mod n, optionally minimized over a coset
    SymbolLength {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        theta: PathBuf,
        /// JSON array of classes spanning the coset
        #[arg(long)]
        ns: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 20)]
        cap: u64,
    },
    /// Gabber's example at a prime
    Gabber {
        #[arg(long)]
        ell: u64,
    },
    /// Hodge-locus residual of a form at a point of the Siegel domain
    HodgeLocus {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        siegel: PathBuf,
    },
    /// Slopes, discriminant and central charge of a class
    Stab {
        #[arg(long)]
        class: PathBuf,
        #[arg(long = "H")]
        h: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        d: String,
    },
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_class(path: &Path) -> Result<TwoClass> {
    Ok(two_from_json(&read::<ClassMap>(path)?)?)
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print(v: &Value) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Commands::Pipeline { n, h_type, theta, seed, out } => {
            let n = parse_int(&n)?;
            let parsed: Vec<Int> = h_type.iter().map(|s| parse_int(s)).collect::<Result<_, _>>()?;
            let h_type: [Int; 3] = parsed.try_into().map_err(|_| anyhow::anyhow!("--h-type needs three entries"))?;
            let theta = match theta {
                Some(p) => read_class(&p)?,
                None => pindex_core::pipeline::polarization(&h_type)?,
            };
            let c = commands::run(&n, &h_type, &theta, seed)?;
            let text = cert::to_string(&c);
            match out {
                Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => emit(&format!("{text}\n"))?,
            }
            if let Some(stage) = c.failed_stage() {
                eprintln!("stage {} failed", stage.name());
            }
            Ok(c.all_passed())
        }
        Commands::Verify { cert: path } => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let c = cert::from_str(&text)?;
            let v = commands::verify(&c);
            print(&v)?;
            Ok(v["passed"].as_bool().unwrap_or(false))
        }
        Commands::Igusa { class } => {
            print(&commands::igusa(&even_from_json(&read::<EvenClassJson>(&class)?)?))?;
            Ok(true)
        }
        Commands::CharPf { u, h } => {
            print(&commands::char_pf(&read_class(&u)?, &read_class(&h)?)?)?;
            Ok(true)
        }
        Commands::Type { form } => {
            print(&commands::alt_type(&read::<FormJson>(&form)?)?)?;
            Ok(true)
        }
        Commands::Fm { class } => {
            print(&commands::fm(&even_from_json(&read::<EvenClassJson>(&class)?)?))?;
            Ok(true)
        }
        Commands::DtTable { dmax, format } => {
            let mut text = commands::dt_table(dmax, &format)?;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            emit(&text)?;
            Ok(true)
        }
        Commands::DtCheck { d, n } => {
            let v = commands::dt_check(&parse_int(&d)?, &parse_int(&n)?);
            print(&v)?;
            Ok(v["implication_holds"].as_bool().unwrap_or(false))
        }
        Commands::HodgeIndex { datum } => {
            print(&commands::hodge_index(&commands::datum_from_json(&read::<DatumJson>(&datum)?)?)?)?;
            Ok(true)
        }
        Commands::Period { datum } => {
            print(&commands::period(&commands::datum_from_json(&read::<DatumJson>(&datum)?)?)?)?;
            Ok(true)
        }
        Commands::SymbolLength { n, theta, ns, cap } => {
            let ns = match ns {
                Some(p) => read::<Vec<ClassMap>>(&p)?.iter().map(two_from_json).collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            print(&commands::symbol_length(&read_class(&theta)?, n, &ns, cap)?)?;
            Ok(true)
        }
        Commands::Gabber { ell } => {
            print(&commands::gabber(ell)?)?;
            Ok(true)
        }
        Commands::HodgeLocus { form, siegel } => {
            let m = rat_matrix_from_json(&read::<MatrixJson>(&form)?)?;
            let z = commands::siegel_from_json(&read::<SiegelJson>(&siegel)?)?;
            print(&commands::hodge_locus(&m, &z)?)?;
            Ok(true)
        }
        Commands::Stab { class, h, a, b, c, d } => {
            let v = even_from_json(&read::<EvenClassJson>(&class)?)?;
            let p = StabParams::new(parse_rat(&a)?, parse_rat(&b)?, parse_rat(&c)?, parse_rat(&d)?);
            print(&commands::stab(&v, &read_class(&h)?, &p)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
