//! Command-line driver. Every command prints JSON lines on stdout; results
//! that carry a certificate also write it to `--out` when given.
//!
//! Exit codes: 0 success, 1 verified-negative result, 2 budget ran out
//! (bracket or unknown), 64 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fan_fraisse::amalgam::{
    amalgamate_chained, chained_catalog, check_dominating, coinitial_cover, expansion_epi, expansion_witness,
    generic_build, GenericConfig, InverseSequence,
};
use fan_fraisse::cert::{self, Certificate};
use fan_fraisse::chains::{all_maximal_chains, chain_image_of_map, multinomial, ChainEpi};
use fan_fraisse::duality::verify_duality_map;
use fan_fraisse::epi::epimorphism_maps;
use fan_fraisse::fan::fans_up_to;
use fan_fraisse::fan_ramsey::{
    build_u, ramsey_witness, verify_ramsey_instance, RamseyContext, RamseyInstance, RamseyOutcome, RamseyVerdict,
};
use fan_fraisse::fink::{semigroup_elements, tetris, BlockSeq, FinVec};
use fan_fraisse::metrics::{nakr_merge, random_linear_extension, random_nakr_instance};
use fan_fraisse::ramsey::{
    gr_search, lelek_number_search, lelek_witness, size_determined_find, size_determined_number_search, BlockDomain,
    Colouring, LelekOutcome, LelekParams, NumberSearch, SetTupleDomain, SizeDeterminedOutcome,
};
use fan_fraisse::{ChainedFan, Error, Fan, FanEpi, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Parser, Debug)]
#[command(name = "fan-fraisse", version, about = "Finite fans, amalgamation and Ramsey searches")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget for searches (default from FAN_FRAISSE_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Epimorphism mode.
    #[arg(long, global = true, default_value = "symmetrized")]
    pub mode: Mode,
    /// Write the certificate of the result here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fans and their epimorphisms.
    #[command(subcommand)]
    Fans(FansCmd),
    /// Maximal chains.
    #[command(subcommand)]
    Chains(ChainsCmd),
    /// Stone duality checks.
    #[command(subcommand)]
    Duality(DualityCmd),
    /// Amalgamate two chain-epimorphisms with a common target.
    Amalgamate(AmalgamateArgs),
    /// Cover a chained fan by a canonical one with equal heights.
    Coinitial(ChainedArgs),
    /// Map a chain expansion of the expansion witness onto the cover.
    Expansion(ChainedArgs),
    /// Finite approximations of the generic inverse limit.
    #[command(subcommand)]
    Generic(GenericCmd),
    /// Finite-union semigroups.
    #[command(subcommand)]
    Fin(FinCmd),
    /// Ramsey searches.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    /// Merge two nearby chains by perturbing an epimorphism.
    Nakr(NakrArgs),
    /// Certificates.
    #[command(subcommand)]
    Cert(CertCmd),
}

#[derive(Subcommand, Debug)]
pub enum FansCmd {
    /// Every fan with at most this many vertices.
    Enumerate {
        #[arg(long)]
        max_vertices: usize,
    },
    /// Every epimorphism between two fans.
    Epis {
        #[arg(long, value_delimiter = ',')]
        source: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        target: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChainsCmd {
    /// Number of maximal chains.
    Count {
        #[arg(long, value_delimiter = ',')]
        branches: Vec<usize>,
        /// Also enumerate the chains and compare.
        #[arg(long)]
        list: bool,
    },
    /// Image of a chain under a vertex map.
    Image {
        #[arg(long, value_delimiter = ',')]
        source: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        target: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
        /// Linear extension of the source (canonical if omitted).
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DualityCmd {
    Verify {
        #[arg(long, value_delimiter = ',')]
        source: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        target: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
        /// Chain on the source; with --target-order also checks ≤_BA.
        #[arg(long, value_delimiter = ',')]
        source_order: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        target_order: Option<Vec<usize>>,
    },
}

#[derive(Args, Debug)]
pub struct AmalgamateArgs {
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<usize>,
    /// `f: B → A` as a vertex map.
    #[arg(long, value_delimiter = ',')]
    pub f: Vec<usize>,
    /// `g: D → A` as a vertex map.
    #[arg(long, value_delimiter = ',')]
    pub g: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub a_order: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub b_order: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub d_order: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct ChainedArgs {
    #[arg(long, value_delimiter = ',')]
    pub branches: Vec<usize>,
    /// Linear extension (canonical if omitted).
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
pub enum GenericCmd {
    Build {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        catalog_max_vertices: usize,
        #[arg(long, default_value_t = 5000)]
        max_level_vertices: usize,
    },
    Check {
        /// Sequence JSON as printed by `generic build`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        catalog_max_vertices: usize,
        #[arg(long)]
        up_to_level: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FinCmd {
    /// Elements of the semigroup generated by a star block sequence.
    Semigroup {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        l: u8,
        /// Entries separated by ';', values by ','.
        #[arg(long)]
        entries: String,
        /// Length of the star tuples (1 lists plain elements).
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// `T_i(p)`.
    Tetris {
        #[arg(long)]
        i: u8,
        #[arg(long, value_delimiter = ',')]
        values: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RamseyCmd {
    /// Least n at which every colouring of k-block partitions has an
    /// l-block partition with monochromatic coarsenings.
    Gr {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        r: u8,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// The FIN_k statement: the least n, or a witness for one colouring.
    Fin {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        l: u8,
        #[arg(long)]
        r: u8,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Search for the least n.
        #[arg(long)]
        exhaustive: bool,
        /// Find a witness for a seeded random colouring at this n.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Size-determined colourings: the least N, or bases for one colouring.
    Sized {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        ls: Vec<usize>,
        #[arg(long)]
        r: u8,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Find bases for a seeded random colouring at this ground size.
        #[arg(long)]
        ground: Option<usize>,
    },
    /// The Ramsey statement for chained fans.
    Fan(FanArgs),
}

#[derive(Args, Debug)]
pub struct FanArgs {
    #[arg(long = "S", value_delimiter = ',')]
    pub s: Vec<usize>,
    #[arg(long = "T", value_delimiter = ',')]
    pub t: Vec<usize>,
    #[arg(long)]
    pub r: u8,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    /// Compute n and N by exact search.
    #[arg(long)]
    pub paper_exact: bool,
    /// Colouring file: {"r": .., "colours": [..]} over the hom-set.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Check every colouring against every g instead of one colouring.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Args, Debug)]
pub struct NakrArgs {
    /// {"source": fan, "target": fan, "map": [..], "mode": ..}
    #[arg(long)]
    pub phi: Option<PathBuf>,
    /// Chained fan file on the source of phi.
    #[arg(long = "chainC", alias = "chain-c")]
    pub chain_c: Option<PathBuf>,
    #[arg(long = "chainD", alias = "chain-d")]
    pub chain_d: Option<PathBuf>,
    /// Generate a random valid instance from the seed instead.
    #[arg(long)]
    pub random: bool,
    /// Largest B for the exact fallback search.
    #[arg(long, default_value_t = 16)]
    pub search_limit: usize,
}

#[derive(Subcommand, Debug)]
pub enum CertCmd {
    Verify { file: PathBuf },
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

fn parse_list_u8(s: &str) -> Result<Vec<u8>, String> {
    parse_list(s)?
        .into_iter()
        .map(|x| u8::try_from(x).map_err(|e| e.to_string()))
        .collect()
}

/// Where output goes; collected so tests can run commands in-process.
pub struct Ctx<'a> {
    pub seed: u64,
    pub budget: u64,
    pub mode: Mode,
    pub out: Option<PathBuf>,
    pub stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn line<T: Serialize>(&mut self, v: &T) -> Result<(), Error> {
        let text = serde_json::to_string(v).map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(self.stdout, "{text}").map_err(|e| Error::Internal(e.to_string()))
    }

    fn budget_json(&self) -> Value {
        json!({ "nodes": self.budget })
    }

    /// Verifies, prints and optionally stores a certificate.
    fn emit(&mut self, cert: Certificate) -> Result<Certificate, Error> {
        let cert = cert.verified()?;
        if let Some(path) = &self.out {
            fs::write(path, cert.to_json()? + "\n").map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        }
        self.line(&json!({ "certificate": { "kind": cert.kind, "verdict": cert.verdict, "verified": cert.verified } }))?;
        Ok(cert)
    }
}

/// Parses `argv` and runs the command, writing to `stdout`.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let budget = cli.budget.or_else(env_budget).unwrap_or(DEFAULT_BUDGET);
    let mut ctx = Ctx {
        seed: cli.seed,
        budget,
        mode: cli.mode,
        out: cli.out.clone(),
        stdout,
    };
    match dispatch(&cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn env_budget() -> Option<u64> {
    std::env::var("FAN_FRAISSE_BUDGET").ok()?.trim().parse().ok()
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } | Error::CapExceeded { .. } => EXIT_BUDGET,
        Error::NoWitness(_) | Error::IllDefined(_) | Error::Internal(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn fan(branches: &[usize]) -> Result<Fan, Error> {
    Fan::from_branches(branches)
}

fn chained(branches: &[usize], order: &Option<Vec<usize>>) -> Result<ChainedFan, Error> {
    let f = fan(branches)?;
    match order {
        Some(o) => ChainedFan::new(f, o.clone()),
        None => Ok(ChainedFan::canonical(&f)),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<i32, Error> {
    match cmd {
        Command::Fans(FansCmd::Enumerate { max_vertices }) => {
            let fans = fans_up_to(*max_vertices);
            for f in &fans {
                ctx.line(&json!({ "fan": f }))?;
            }
            ctx.line(&json!({ "count": fans.len() }))?;
            Ok(EXIT_OK)
        }
        Command::Fans(FansCmd::Epis { source, target }) => {
            let (s, t) = (fan(source)?, fan(target)?);
            let maps = epimorphism_maps(&s, &t, ctx.mode);
            for m in &maps {
                ctx.line(&json!({ "map": m, "mode": ctx.mode }))?;
            }
            ctx.line(&json!({ "count": maps.len() }))?;
            Ok(if maps.is_empty() { EXIT_NEGATIVE } else { EXIT_OK })
        }
        Command::Chains(ChainsCmd::Count { branches, list }) => {
            let f = fan(branches)?;
            let count = multinomial(f.branch_lengths());
            let count64 = u64::try_from(count).map_err(|_| Error::CapExceeded {
                what: "chain count".into(),
                size: usize::MAX,
                cap: u64::MAX as usize,
            })?;
            if *list {
                let chains = all_maximal_chains(&f);
                for c in &chains {
                    ctx.line(&json!({ "order": c.order() }))?;
                }
                if chains.len() as u128 != count {
                    return Err(Error::Internal("enumeration disagrees with the count".into()));
                }
            }
            ctx.line(&json!({ "count": count64 }))?;
            if ctx.out.is_some() {
                let c = Certificate::new(
                    "chains-count",
                    &cert::ChainCountParams { branches: branches.clone() },
                    "exact",
                    &cert::ChainCountWitness { count: count64 },
                    Value::Null,
                    ctx.seed,
                )?;
                ctx.emit(c)?;
            }
            Ok(EXIT_OK)
        }
        Command::Chains(ChainsCmd::Image {
            source,
            target,
            map,
            order,
        }) => {
            let sc = chained(source, order)?;
            let t = fan(target)?;
            let image = chain_image_of_map(map, &t, &sc)?;
            ctx.line(&json!({
                "valid": image.valid,
                "links": image.links,
                "chain": image.chain.as_ref().map(|c| c.order().to_vec()),
            }))?;
            Ok(if image.valid { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Duality(DualityCmd::Verify {
            source,
            target,
            map,
            source_order,
            target_order,
        }) => {
            let (s, t) = (fan(source)?, fan(target)?);
            let chains = match (source_order, target_order) {
                (Some(so), Some(to)) => Some((ChainedFan::new(s.clone(), so.clone())?, ChainedFan::new(t.clone(), to.clone())?)),
                (None, None) => None,
                _ => return Err(Error::InvalidInput("give both chain orders or neither".into())),
            };
            let report = verify_duality_map(map, &s, &t, chains.as_ref().map(|(a, b)| (a, b)), Mode::Directed)?;
            ctx.line(&report)?;
            let verdict = if report.pass { "pass" } else { "fail" };
            let params = cert::DualityParams {
                source: s,
                target: t,
                map: map.clone(),
                relation: Mode::Directed,
                chains,
            };
            ctx.emit(Certificate::new("duality", &params, verdict, &report, Value::Null, ctx.seed)?)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Amalgamate(a) => {
            let ac = chained(&a.a, &a.a_order)?;
            let bc = chained(&a.b, &a.b_order)?;
            let dc = chained(&a.d, &a.d_order)?;
            let f = ChainEpi::new(bc, ac.clone(), a.f.clone(), ctx.mode)?;
            let g = ChainEpi::new(dc, ac, a.g.clone(), ctx.mode)?;
            let am = amalgamate_chained(&f, &g)?;
            ctx.line(&json!({ "e": am.e, "k": am.k.map(), "l": am.l.map() }))?;
            let params = cert::AmalgamParams { f, g };
            let c = ctx.emit(Certificate::new("amalgam", &params, "found", &am, Value::Null, ctx.seed)?)?;
            Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Coinitial(a) => {
            let target = chained(&a.branches, &a.order)?;
            let cover = coinitial_cover(&target, ctx.mode);
            ctx.line(&cover)?;
            let params = cert::CoverParams { target, mode: ctx.mode };
            let c = ctx.emit(Certificate::new("coinitial", &params, "found", &cover, Value::Null, ctx.seed)?)?;
            Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Expansion(a) => {
            let target = chained(&a.branches, &a.order)?;
            let w = expansion_witness(&target, ctx.mode);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let d = random_linear_extension(&w.d, &mut rng)?;
            let epi = expansion_epi(&d, w.cover.source(), ctx.mode)?;
            let onto_cover = epi.target() == w.cover.source();
            ctx.line(&json!({ "witness": w.d, "chain": d.order(), "map": epi.map(), "onto_cover": onto_cover }))?;
            let params = cert::CoverParams {
                target: w.cover.source().clone(),
                mode: ctx.mode,
            };
            let c = ctx.emit(Certificate::new("expansion", &params, "found", &epi, Value::Null, ctx.seed)?)?;
            Ok(if c.verified && onto_cover { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Generic(GenericCmd::Build {
            steps,
            catalog_max_vertices,
            max_level_vertices,
        }) => {
            let catalog = chained_catalog(*catalog_max_vertices);
            let config = GenericConfig {
                seed: ctx.seed,
                mode: ctx.mode,
                max_level_vertices: *max_level_vertices,
            };
            let seq = generic_build(&catalog, *steps, &config)?;
            ctx.line(&seq)?;
            let params = cert::GenericParams {
                catalog_max_vertices: *catalog_max_vertices,
                up_to_level: 0,
            };
            let c = ctx.emit(Certificate::new("generic", &params, "built", &seq, json!({ "max_level_vertices": max_level_vertices }), ctx.seed)?)?;
            Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Generic(GenericCmd::Check {
            input,
            catalog_max_vertices,
            up_to_level,
        }) => {
            let mut seq: InverseSequence = read_json(input)?;
            seq.validate()?;
            let catalog = chained_catalog(*catalog_max_vertices);
            let level = up_to_level.unwrap_or(0).min(seq.depth() - 1);
            let report = check_dominating(&seq, &catalog, level)?;
            ctx.line(&report)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Fin(FinCmd::Semigroup { k, l, entries, d }) => {
            let vecs = entries
                .split(';')
                .map(|e| parse_list_u8(e).map(FinVec::new).map_err(Error::InvalidInput))
                .collect::<Result<Vec<_>, _>>()?;
            let b = BlockSeq::new(*l, vecs);
            if *d <= 1 {
                let elems = semigroup_elements(&b, *k, 1_000_000)?;
                for e in &elems {
                    ctx.line(e)?;
                }
                ctx.line(&json!({ "count": elems.len() }))?;
            } else {
                let elems = fan_fraisse::fink::generated_semigroup(&b, *k, *d, 1_000_000)?;
                for e in &elems {
                    ctx.line(e)?;
                }
                ctx.line(&json!({ "count": elems.len() }))?;
            }
            Ok(EXIT_OK)
        }
        Command::Fin(FinCmd::Tetris { i, values }) => {
            ctx.line(&tetris(*i, &FinVec::new(values.clone())))?;
            Ok(EXIT_OK)
        }
        Command::Ramsey(RamseyCmd::Gr { k, l, r, n_max }) => {
            let res = gr_search(*k, *l, *r, *n_max, ctx.budget)?;
            let params = cert::GrParams {
                k: *k,
                l: *l,
                r: *r,
                n_max: *n_max,
            };
            number_result(ctx, "gr", &params, res)
        }
        Command::Ramsey(RamseyCmd::Fin {
            d,
            m,
            k,
            l,
            r,
            n_max,
            exhaustive,
            n,
        }) => {
            let params = LelekParams { d: *d, m: *m, k: *k, l: *l };
            if let Some(n) = n {
                let domain = BlockDomain::new(*k, *d, *n);
                let colouring = random_colouring(ctx.seed, domain.len(), *r);
                return match lelek_witness(&domain, &colouring, &params)? {
                    LelekOutcome::Found(w) => {
                        ctx.line(&w)?;
                        let c = Certificate::new(
                            "lelek",
                            &json!({ "params": params, "n": n, "r": r }),
                            "found",
                            &cert::LelekWitnessCert { colouring, witness: w },
                            Value::Null,
                            ctx.seed,
                        )?;
                        let c = ctx.emit(c)?;
                        Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
                    }
                    other => {
                        ctx.line(&other)?;
                        Ok(EXIT_NEGATIVE)
                    }
                };
            }
            if !exhaustive {
                return Err(Error::InvalidInput("pass --exhaustive or --n".into()));
            }
            let res = lelek_number_search(&params, *r, *n_max, ctx.budget)?;
            let p = cert::LelekNumberParams {
                params,
                r: *r,
                n_max: *n_max,
            };
            number_result(ctx, "lelek-number", &p, res)
        }
        Command::Ramsey(RamseyCmd::Sized {
            d,
            ks,
            ls,
            r,
            n_max,
            ground,
        }) => {
            if let Some(ground) = ground {
                let domain = SetTupleDomain::new(*ground, ks, *d, 5_000_000)?;
                let colouring = random_colouring(ctx.seed, domain.len(), *r);
                return match size_determined_find(&domain, &colouring, ls)? {
                    SizeDeterminedOutcome::Found { bases } => {
                        ctx.line(&json!({ "bases": bases }))?;
                        let c = Certificate::new(
                            "size-determined",
                            &cert::SizedWitnessParams {
                                ground: *ground,
                                ks: ks.clone(),
                                d: *d,
                            },
                            "found",
                            &cert::SizedWitness { colouring, bases },
                            Value::Null,
                            ctx.seed,
                        )?;
                        let c = ctx.emit(c)?;
                        Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
                    }
                    other => {
                        ctx.line(&other)?;
                        Ok(EXIT_NEGATIVE)
                    }
                };
            }
            let res = size_determined_number_search(*d, ks, ls, *r, *n_max, ctx.budget)?;
            let p = cert::SizedParams {
                d: *d,
                ks: ks.clone(),
                ls: ls.clone(),
                r: *r,
                n_max: *n_max,
            };
            number_result(ctx, "size-determined-number", &p, res)
        }
        Command::Ramsey(RamseyCmd::Fan(a)) => ramsey_fan(ctx, a),
        Command::Nakr(a) => nakr(ctx, a),
        Command::Cert(CertCmd::Verify { file }) => {
            let text = fs::read_to_string(file).map_err(|e| Error::InvalidInput(format!("{}: {e}", file.display())))?;
            let c = Certificate::from_json(&text)?;
            let ok = cert::verify(&c)?;
            ctx.line(&json!({ "kind": c.kind, "verdict": c.verdict, "verified": ok }))?;
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn random_colouring(seed: u64, size: usize, r: u8) -> Colouring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Colouring {
        r,
        colours: (0..size).map(|_| rng.gen_range(0..r)).collect(),
    }
}

fn number_result<P: Serialize>(ctx: &mut Ctx, kind: &str, params: &P, res: NumberSearch) -> Result<i32, Error> {
    let verdict = match res.exact {
        Some(_) => "exact",
        None => "bracket",
    };
    ctx.line(&json!({
        "kind": kind,
        "exact": res.exact,
        "lower_bound": res.lower_bound,
        "upper_bound": res.upper_bound,
    }))?;
    let budget = ctx.budget_json();
    let c = ctx.emit(Certificate::new(kind, params, verdict, &res, budget, ctx.seed)?)?;
    if !c.verified {
        return Ok(EXIT_NEGATIVE);
    }
    Ok(if res.exact.is_some() { EXIT_OK } else { EXIT_BUDGET })
}

fn ramsey_fan(ctx: &mut Ctx, a: &FanArgs) -> Result<i32, Error> {
    let s = ChainedFan::canonical(&fan(&a.s)?);
    let t = ChainedFan::canonical(&fan(&a.t)?);
    let (n, big_n) = if a.paper_exact { (None, None) } else { (a.n, a.big_n) };
    if !a.paper_exact && (n.is_none() || big_n.is_none()) {
        return Err(Error::InvalidInput("pass --n and --N, or --paper-exact".into()));
    }
    let built = build_u(&s, &t, a.r, n, big_n, 6, ctx.budget)?;
    ctx.line(&json!({
        "n": built.n,
        "N": built.big_n,
        "n_source": built.n_source,
        "N_source": built.big_n_source,
    }))?;
    let params = cert::FanRamseyParams {
        s: s.clone(),
        t: t.clone(),
        u: built.u.clone(),
        r: a.r,
    };
    if a.exhaustive {
        let verdict = verify_ramsey_instance(&s, &t, &built.u, a.r, ctx.budget, ctx.seed)?;
        ctx.line(&verdict)?;
        let (label, code) = match &verdict {
            RamseyVerdict::Proven { .. } => ("proven", EXIT_OK),
            RamseyVerdict::ProvenBySearch { .. } => ("proven_by_search", EXIT_OK),
            RamseyVerdict::SampledOk { .. } => ("sampled_ok", EXIT_BUDGET),
            RamseyVerdict::Refuted { .. } => ("refuted", EXIT_NEGATIVE),
        };
        let budget = ctx.budget_json();
        let c = match &verdict {
            RamseyVerdict::Refuted { colouring } => Certificate::new("ramsey-fan", &params, label, colouring, budget, ctx.seed)?,
            v => Certificate::new("ramsey-fan", &params, label, v, budget, ctx.seed)?,
        };
        let c = ctx.emit(c)?;
        return Ok(if c.verified { code } else { EXIT_NEGATIVE });
    }
    let instance = RamseyInstance::new(s, t, built.u, a.r)?;
    let rctx = RamseyContext::new(instance, 5_000_000)?;
    let colouring = match &a.coloring {
        Some(path) => read_json::<Colouring>(path)?,
        None => random_colouring(ctx.seed, rctx.hom_us.len(), a.r),
    };
    if !colouring.is_valid(rctx.hom_us.len()) || colouring.r != a.r {
        return Err(Error::InvalidInput(format!(
            "colouring must give each of the {} maps a colour below {}",
            rctx.hom_us.len(),
            a.r
        )));
    }
    match ramsey_witness(&rctx, &colouring)? {
        RamseyOutcome::Found(certificate) => {
            ctx.line(&json!({ "g": certificate.g, "colour": certificate.colour, "composites": certificate.composites.len() }))?;
            let w = cert::FanRamseyWitness { colouring, certificate };
            let c = ctx.emit(Certificate::new("ramsey-fan", &params, "found", &w, Value::Null, ctx.seed)?)?;
            Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
        }
        failed => {
            ctx.line(&failed)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

#[derive(serde::Deserialize)]
struct PhiFile {
    source: Fan,
    target: Fan,
    map: Vec<usize>,
    #[serde(default)]
    mode: Option<Mode>,
}

fn nakr(ctx: &mut Ctx, a: &NakrArgs) -> Result<i32, Error> {
    let (phi, c, d) = if a.random {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let inst = random_nakr_instance(&mut rng, 3, 1, true, ctx.mode)?;
        (inst.phi, inst.c, inst.d)
    } else {
        let (Some(p), Some(cp), Some(dp)) = (&a.phi, &a.chain_c, &a.chain_d) else {
            return Err(Error::InvalidInput("pass --phi, --chainC and --chainD, or --random".into()));
        };
        let pf: PhiFile = read_json(p)?;
        let phi = FanEpi::new(pf.source, pf.target, pf.map, pf.mode.unwrap_or(ctx.mode))?;
        (phi, read_json::<ChainedFan>(cp)?, read_json::<ChainedFan>(dp)?)
    };
    let res = nakr_merge(&phi, &c, &d, a.search_limit)?;
    ctx.line(&res)?;
    let params = cert::NakrParams {
        source: phi.source().clone(),
        target: phi.target().clone(),
        phi: phi.map().to_vec(),
        mode: phi.mode(),
        c,
        d,
    };
    let c = ctx.emit(Certificate::new("nakr", &params, "found", &res, Value::Null, ctx.seed)?)?;
    Ok(if c.verified { EXIT_OK } else { EXIT_NEGATIVE })
}
