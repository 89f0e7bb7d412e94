//! Command-line front end: builds named complexes, emits and checks certificates, and runs
//! the brute-force oracle suites.

pub mod oracle;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anodyne::certify::{replay, search, SearchOptions};
use anodyne::complex::{boundary, generalized_horn, horn, standard_simplex};
use anodyne::cube::{self, HornSetKind, Permutation};
use anodyne::{text, twisted, Certificate, DecoratedComplex, Regime};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "anodyne",
    version,
    about = "Certificates for anodyne extensions of finite decorated complexes"
)]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a named complex in the text format.
    Build {
        object: Object,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Horn index for `horn`.
        #[arg(long, default_value_t = 1)]
        i: u32,
        /// Face indices for `horn-set`, e.g. `0,3`.
        #[arg(long, value_delimiter = ',')]
        faces: Vec<u32>,
        /// Stage for `m-stage`.
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
    /// Emit certificates found by search or by the horn-set scheme.
    Certify {
        #[command(subcommand)]
        what: CertifyCommand,
    },
    /// Replay a certificate. Exit 0 if it checks, 1 with the failing step otherwise.
    Verify { certificate: PathBuf },
    Cube {
        #[command(subcommand)]
        what: CubeCommand,
    },
    Twisted {
        #[command(subcommand)]
        what: TwistedCommand,
    },
    /// Brute-force cross-checks.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Object {
    Simplex,
    Boundary,
    Horn,
    HornSet,
    Cube,
    CubeBoundary,
    LeftBox,
    JBox,
    Q,
    R,
    J,
    MStage,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Inner,
    Marked,
}

#[derive(Subcommand, Debug)]
enum CertifyCommand {
    /// Search for a horn-step certificate from START to TARGET (text format files).
    Search {
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value = "plain")]
        regime: String,
        #[arg(long, default_value_t = SearchOptions::default().budget)]
        budget: usize,
        #[arg(long)]
        inner_only: bool,
    },
    /// Fill `Λ^n_T ↪ Δ^n`.
    HornSet {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        faces: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Kind::Inner)]
        kind: Kind,
    },
}

#[derive(Subcommand, Debug)]
enum CubeCommand {
    /// The permutations of `S_n` in the cube order.
    Order {
        #[arg(long)]
        n: u32,
    },
    /// `LC^n ↪ C^n`.
    Fill {
        #[arg(long)]
        n: u32,
    },
    /// `LC^n ↪ J^n`.
    Inner {
        #[arg(long)]
        n: u32,
    },
    /// `J^n ↪ C^n`.
    Tail {
        #[arg(long)]
        n: u32,
    },
    /// The face set `T` with `B_τ ≅ Λ^n_T`.
    Btau {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        perm: Vec<u32>,
    },
    /// `(K × ∂Δ^1) ∪ (K' × Δ^1) ↪ K × Δ^1` for text-format complexes K' ⊆ K.
    Prism {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        sub: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum TwistedCommand {
    /// `J(Δ^n) ↪ R(Δ^n)`.
    Vn {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = twisted::DEFAULT_VN_BOUND)]
        bound: u32,
    },
    /// The `n`-simplices of `Tw(X)`; edges are tagged when fully scaled.
    Tw {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        n: u32,
    },
    PushoutCheck {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Random subset-family identities against cell-set brute force.
    Subsets {
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit codes.
pub const OK: i32 = 0;
pub const FAILED: i32 = 1;
pub const USAGE: i32 = 2;

struct Output<'a> {
    path: Option<PathBuf>,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    fn emit(&mut self, content: &str) -> anyhow::Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?,
            None => self.out.write_all(content.as_bytes())?,
        }
        Ok(())
    }

    fn certificate(&mut self, cert: &Certificate) -> anyhow::Result<()> {
        let mut json = cert.to_json();
        json.push('\n');
        self.emit(&json)
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_complex(path: &Path) -> anyhow::Result<DecoratedComplex> {
    text::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn face_set(faces: &[u32]) -> BTreeSet<u32> {
    faces.iter().copied().collect()
}

fn build(object: Object, n: u32, i: u32, faces: &[u32], k: u32) -> anyhow::Result<DecoratedComplex> {
    let plain = |c| DecoratedComplex::flat(c, Regime::Plain);
    Ok(match object {
        Object::Simplex => plain(standard_simplex(n)),
        Object::Boundary => plain(boundary(n)),
        Object::Horn => plain(horn(n, i)?),
        Object::HornSet => plain(generalized_horn(n, &face_set(faces))?),
        Object::Cube => plain(cube::cube_complex(n)),
        Object::CubeBoundary => plain(cube::boundary_complex(n)),
        Object::LeftBox => plain(cube::left_box(n)),
        Object::JBox => plain(cube::j_complex(n)),
        Object::Q => twisted::q(n).decorated,
        Object::R => twisted::r(n),
        Object::J => twisted::j(n),
        Object::MStage => {
            if k > n {
                bail!("stage {k} is out of range for n = {n}");
            }
            let stage = twisted::m_filtration(n).stages.swap_remove(k as usize);
            twisted::r(n).restrict(&stage)?
        }
    })
}

fn check_cube_dim(n: u32) -> anyhow::Result<()> {
    if n > cube::MAX_CUBE_DIM {
        bail!("cube dimension {n} exceeds {}", cube::MAX_CUBE_DIM);
    }
    Ok(())
}

fn dispatch(cli: Cli, o: &mut Output) -> anyhow::Result<i32> {
    match cli.command {
        Command::Build { object, n, i, faces, k } => {
            o.emit(&text::write(&build(object, n, i, &faces, k)?))?;
        }
        Command::Certify { what } => match what {
            CertifyCommand::Search {
                start,
                target,
                regime,
                budget,
                inner_only,
            } => {
                let regime: Regime = regime.parse()?;
                let opts = SearchOptions { budget, inner_only };
                match search(&read_complex(&start)?, &read_complex(&target)?, regime, opts)? {
                    Some(cert) => o.certificate(&cert)?,
                    None => {
                        writeln!(o.out, "no certificate found within the budget")?;
                        return Ok(FAILED);
                    }
                }
            }
            CertifyCommand::HornSet { n, faces, kind } => {
                let kind = match kind {
                    Kind::Inner => HornSetKind::Inner,
                    Kind::Marked => HornSetKind::Marked,
                };
                o.certificate(&cube::horn_set_certificate(n, &face_set(&faces), kind)?)?;
            }
        },
        Command::Verify { certificate } => {
            let cert = Certificate::from_json(&read(&certificate)?)
                .with_context(|| format!("parsing {}", certificate.display()))?;
            let report = replay(&cert);
            o.emit(&format!("{report}\n"))?;
            return Ok(if report.ok { OK } else { FAILED });
        }
        Command::Cube { what } => match what {
            CubeCommand::Order { n } => {
                check_cube_dim(n)?;
                let names: Vec<String> = Permutation::all(n).iter().map(|p| p.to_string()).collect();
                o.emit(&format!("{}\n", names.join(" < ")))?;
            }
            CubeCommand::Fill { n } => {
                check_cube_dim(n)?;
                o.certificate(&cube::cube_fill(n)?)?;
            }
            CubeCommand::Inner { n } => {
                check_cube_dim(n)?;
                o.certificate(&cube::inner_filtration(n)?)?;
            }
            CubeCommand::Tail { n } => {
                check_cube_dim(n)?;
                o.certificate(&cube::marked_tail(n)?)?;
            }
            CubeCommand::Btau { n, perm } => {
                check_cube_dim(n)?;
                let tau = Permutation::new(perm)?;
                if tau.n() != n {
                    bail!("{tau} is not a permutation of 1..={n}");
                }
                let (_, t) = cube::b_tau(n, &tau)?;
                let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                o.emit(&format!("{tau}: {}\n", t.join(",")))?;
            }
            CubeCommand::Prism { complex, sub } => {
                let k = read_complex(&complex)?;
                let k_sub = read_complex(&sub)?;
                o.certificate(&cube::prism_certificate(k.complex(), k_sub.complex())?)?;
            }
        },
        Command::Twisted { what } => match what {
            TwistedCommand::Vn { n, bound } => {
                o.certificate(&twisted::v_certificate_bounded(n, bound)?)?;
            }
            TwistedCommand::Tw { x, n } => {
                let x = read_complex(&x)?;
                let mut lines = String::new();
                for s in twisted::tw_enumerate(&x, n) {
                    lines.push_str(&s.to_string());
                    if n == 1 && twisted::is_fully_scaled_edge(&x, &s)? {
                        lines.push_str(" fully-scaled");
                    }
                    lines.push('\n');
                }
                o.emit(&lines)?;
            }
            TwistedCommand::PushoutCheck { n } => {
                if n == 0 {
                    bail!("the pushout check needs n >= 1");
                }
                let ok = twisted::pushout_decoration_check(n);
                o.emit(&format!("{ok}\n"))?;
                return Ok(if ok { OK } else { FAILED });
            }
        },
        Command::Oracle { what } => match what {
            OracleCommand::Subsets { n, trials, seed } => match oracle::fuzz_subsets(n, trials, seed) {
                Ok(passed) => o.emit(&format!("subsets n={n} seed={seed}: {passed} passed\n"))?,
                Err(e) => {
                    o.emit(&format!("subsets n={n} seed={seed}: {e}\n"))?;
                    return Ok(FAILED);
                }
            },
        },
    }
    Ok(OK)
}

/// Runs the command line `argv` (including the program name), writing to `out` and `err`,
/// and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut o = Output {
        path: cli.out.clone(),
        out,
    };
    match dispatch(cli, &mut o) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            match e.downcast_ref::<anodyne::Error>() {
                Some(anodyne::Error::Falsified(_)) => FAILED,
                _ => USAGE,
            }
        }
    }
}
