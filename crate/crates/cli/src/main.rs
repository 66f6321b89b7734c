use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hbs_core::analysis::{
    classify_vertex, empirical_frequencies, enumerate_configs, kingdom, min_pair_distance, min_squared_distance,
    Classification, KingdomCenter, P2_CONFIG_NAMES,
};
use hbs_core::configs::FLOWERS;
use hbs_core::derivations::{self as d, Derived};
use hbs_core::golden::{CycloPoint, GoldenInt, GoldenRational};
use hbs_core::io::{self, PatchFile, RenderStyle};
use hbs_core::seeds::{seed_names, seed_patch};
use hbs_core::substitution::{p2_rule, p3_rule, star_rule, substitute};
use hbs_core::tiling::{check_matching, Patch, TileKind, Tileset};

#[derive(Parser)]
#[command(name = "hbs", version, about = "Penrose, HBS, Star and Gemstones tilings in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a patch by repeated substitution of a seed.
    Gen {
        #[arg(long)]
        tileset: Tileset,
        #[arg(long)]
        seed: String,
        #[arg(long)]
        steps: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive another tiling from a patch.
    Derive {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        to: Tileset,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Decompose HBS or Star tiles into P2 or P3 tiles.
        #[arg(long)]
        decorate: bool,
        /// For p2 to star: join sun centers instead of star centers.
        #[arg(long)]
        suns: bool,
    },
    /// Check a property of a patch.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        check: Check,
    },
    /// Tile frequencies over the interior against their exact values.
    Freq {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Vertex configurations of a patch, or of one vertex.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        /// A vertex as four integers, e.g. "0 0 0 0".
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Draw one patch, or a second one superimposed, as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        over: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_arrows: bool,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        no_source: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Matching,
    Frequencies,
    Configs,
    Distances,
    Forcing,
    Roundtrip,
}

/// A usage, input or unsupported-request error; exits 2. Failed checks
/// are reported as `Ok(false)` and exit 1.
enum Fail {
    Usage(String),
}

impl<E: Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<PatchFile, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write(file: &PatchFile, out: Option<&Path>) -> Result<(), Fail> {
    let text = io::serialize(file);
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Writes `key=value PASS|FAIL` and folds the verdict into `all`.
fn line(all: &mut bool, key: &str, value: impl Display, ok: bool) {
    println!("{key}={value} {}", report(ok));
    *all &= ok;
}

fn derive(src: &Patch, to: Tileset, decorate: bool, suns: bool) -> Result<Derived, Fail> {
    use Tileset::*;
    let whole = |patch| Derived { patch, omitted: 0 };
    if decorate {
        return match (src.tileset, to) {
            (Hbs | Star, P2 | P3) => Ok(whole(d::decorate(src, to)?)),
            (from, to) => Err(Fail::Usage(format!("cannot decorate {from} with {to}"))),
        };
    }
    Ok(match (src.tileset, to) {
        (P2, Hbs) => d::derive_p2_to_hbs(src)?,
        (P3, Hbs) => d::derive_p3_to_hbs(src)?,
        (P2, Star) if suns => d::derive_p2_suns_to_star(src)?,
        (P2, Star) => d::derive_p2_to_star(src)?,
        (P3, Star) => {
            let h = d::derive_p3_to_hbs(src)?;
            let s = d::hbs_to_star(&h.patch)?;
            Derived { patch: s.patch, omitted: h.omitted + s.omitted }
        }
        (P3, P2) => whole(d::p3_to_p2(src)?),
        (Star, Hbs) => whole(d::star_to_hbs(src)?),
        (Hbs, Star) => d::hbs_to_star(src)?,
        (Hbs | Star, P1) => d::derive_hbs_to_p1_labels(src)?,
        (Star, Gemstone) => d::star_to_gemstones(src)?,
        (P2, Gemstone) => d::derive_p2_to_gemstones(src)?,
        (P3, Gemstone) => d::derive_p3_to_gemstones(src)?,
        (from, to) if from == to => whole(src.clone()),
        (Hbs | Star, P2 | P3) => {
            return Err(Fail::Usage(format!("no derivation from {} to {to}; use --decorate", src.tileset)))
        }
        (from, to) => return Err(Fail::Usage(format!("no derivation from {from} to {to}"))),
    })
}

/// A Star patch for star-level checks, derived when needed. Going through
/// HBS keeps the source scale, so far more stars fit in the patch.
fn as_star(p: &Patch) -> Result<Patch, Fail> {
    Ok(match p.tileset {
        Tileset::Star => p.clone(),
        Tileset::Hbs => d::hbs_to_star(p)?.patch,
        Tileset::P2 => d::hbs_to_star(&d::derive_p2_to_hbs(p)?.patch)?.patch,
        Tileset::P3 => d::hbs_to_star(&d::derive_p3_to_hbs(p)?.patch)?.patch,
        t => return Err(Fail::Usage(format!("no Star tiling from {t}"))),
    })
}

fn phi_form(x: &GoldenRational) -> String {
    x.to_string().replace('φ', "phi").replace(' ', "")
}

fn verify(file: &PatchFile, check: Check) -> Result<bool, Fail> {
    let p = &file.patch;
    let mut ok = true;
    match check {
        Check::Matching => {
            let v = check_matching(p);
            for x in v.iter().take(10) {
                println!("violation: {x}");
            }
            line(&mut ok, "violations", v.len(), v.is_empty());
        }
        Check::Frequencies => {
            let r = empirical_frequencies(p);
            if r.exact.is_empty() {
                return Err(Fail::Usage(format!("no exact frequencies for {}", p.tileset)));
            }
            println!("interior_tiles={}", r.total);
            for (k, dev) in &r.deviation {
                println!("dev_{k}={dev:.5}");
            }
            line(&mut ok, "max_deviation", format!("{:.5}", r.max_deviation()), r.total > 0 && r.max_deviation() < 0.02);
        }
        Check::Configs => {
            let configs = enumerate_configs(p);
            let mut names: Vec<&str> = configs.keys().map(|c| c.name.as_str()).collect();
            names.dedup();
            match p.tileset {
                Tileset::P2 => {
                    let known = names.iter().all(|n| P2_CONFIG_NAMES.contains(n));
                    line(&mut ok, "distinct", configs.len(), configs.len() == 7 && known);
                }
                Tileset::Star | Tileset::Hbs => {
                    println!("distinct={}", configs.len());
                    for f in FLOWERS {
                        let present = names.iter().any(|n| n.starts_with(f));
                        line(&mut ok, f, present, present);
                    }
                }
                _ => line(&mut ok, "distinct", configs.len(), !configs.is_empty()),
            }
        }
        Check::Distances => match p.tileset {
            Tileset::P2 => {
                let star = min_pair_distance(p, "star")?;
                let sun = min_pair_distance(p, "sun")?;
                let (es, eu) = (GoldenInt::new(5, 8).to_rational(), GoldenInt::new(2, 3).to_rational());
                line(&mut ok, "min_star_sq", phi_form(&star), star == es);
                line(&mut ok, "min_sun_sq", phi_form(&sun), sun == eu);
            }
            Tileset::Star => {
                // Star vertices are the P2 star centers, and Star edges are
                // φ³ P2 edges
                let mut verts: Vec<CycloPoint> = p.tiles().iter().flat_map(|t| t.vertices()).collect();
                verts.sort();
                verts.dedup();
                let m = min_squared_distance(&verts).ok_or(Fail::Usage("fewer than two vertices".into()))?;
                let star = &m.to_rational() * &GoldenRational::phi().pow(6)?;
                line(&mut ok, "min_star_sq", phi_form(&star), star == GoldenInt::new(5, 8).to_rational());
            }
            t => return Err(Fail::Usage(format!("distances need a p2 or star patch, not {t}"))),
        },
        Check::Forcing => {
            let s = as_star(p)?;
            let r = kingdom(&s, &KingdomCenter::Tile(TileKind::StarS1), 5.0)?;
            let count = |k| r.forced.iter().filter(|t| t.kind == k).count();
            println!("occurrences={}", r.occurrences);
            line(&mut ok, "stable", r.stable, r.stable && r.occurrences >= 20);
            line(&mut ok, "forced_s0", count(TileKind::StarS0), count(TileKind::StarS0) == 1);
            line(&mut ok, "forced_s2", count(TileKind::StarS2), count(TileKind::StarS2) == 2);
        }
        Check::Roundtrip => {
            let text = io::serialize(file);
            let back = io::parse(&text)?;
            line(&mut ok, "serialize", "identical", back == *file && io::serialize(&back) == text);
            if matches!(p.tileset, Tileset::Hbs | Tileset::Star) {
                let hbs = if p.tileset == Tileset::Star { d::star_to_hbs(p)? } else { p.clone() };
                let dec = d::decorate(&hbs, Tileset::P2)?;
                let again = d::derive_p2_to_hbs(&dec)?.patch;
                let same = again.tiles().iter().all(|t| hbs.contains(t));
                line(&mut ok, "decorate_p2", format!("{}/{}", again.len(), hbs.len()), same && !again.is_empty());
            }
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, Fail> {
    match cli.command {
        Command::Gen { tileset, seed, steps, out } => {
            if steps <= 0 {
                return Err(Fail::Usage(format!("steps must be positive, got {steps}")));
            }
            let rule = match tileset {
                Tileset::P2 => p2_rule(),
                Tileset::P3 => p3_rule(),
                Tileset::Star => star_rule(),
                t => return Err(Fail::Usage(format!("no substitution for {t}; generate p2, p3 or star and derive"))),
            };
            let s = seed_patch(tileset, &seed)
                .map_err(|_| Fail::Usage(format!("unknown seed {seed:?}; try one of {:?}", seed_names(tileset))))?;
            let p = substitute(&s, rule, steps as u32)?;
            eprintln!("tiles={} scale_exponent={}", p.len(), p.scale_exponent);
            write(&PatchFile::new(p), out.as_deref())?;
            Ok(true)
        }
        Command::Derive { input, to, out, decorate, suns } => {
            let src = read(&input)?;
            let r = derive(&src.patch, to, decorate, suns)?;
            eprintln!("tiles={} omitted={} scale_exponent={}", r.patch.len(), r.omitted, r.patch.scale_exponent);
            write(&PatchFile::new(r.patch), out.as_deref())?;
            Ok(true)
        }
        Command::Verify { input, check } => verify(&read(&input)?, check),
        Command::Freq { input } => {
            let r = empirical_frequencies(&read(&input)?.patch);
            println!("interior_tiles={}", r.total);
            for (k, f) in &r.empirical {
                let n = r.counts.get(k).copied().unwrap_or(0);
                match r.exact.get(k) {
                    Some(x) => println!("{k} count={n} empirical={f:.5} exact={} ({:.5})", phi_form(x), x.to_f64()),
                    None => println!("{k} count={n} empirical={f:.5}"),
                }
            }
            Ok(true)
        }
        Command::Classify { input, vertex } => {
            let p = read(&input)?.patch;
            if let Some(v) = vertex {
                let c: Vec<i64> = v
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?;
                let [c0, c1, c2, c3] = c[..] else {
                    return Err(Fail::Usage("a vertex is four integers".into()));
                };
                match classify_vertex(&p, CycloPoint::new(c0, c1, c2, c3))? {
                    Classification::Config(c) => println!("{}", c.name),
                    Classification::Boundary => println!("boundary"),
                }
                return Ok(true);
            }
            let mut by_name: BTreeMap<String, usize> = BTreeMap::new();
            let configs = enumerate_configs(&p);
            for (c, n) in &configs {
                *by_name.entry(c.name.clone()).or_insert(0) += n;
            }
            for (name, n) in &by_name {
                println!("{name}={n}");
            }
            println!("distinct={}", configs.len());
            Ok(true)
        }
        Command::Render { input, over, out, no_arrows, no_labels, no_source } => {
            let a = read(&input)?;
            let b = over.as_deref().map(read).transpose()?;
            let style = RenderStyle {
                show_arrows: !no_arrows,
                show_labels: !no_labels,
                show_source: !no_source,
                ..RenderStyle::default()
            };
            let layers: Vec<&PatchFile> = std::iter::once(&a).chain(b.as_ref()).collect();
            let svg = io::render_svg(&layers, &style)?;
            std::fs::write(&out, svg).map_err(|e| Fail::Usage(format!("{}: {e}", out.display())))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
