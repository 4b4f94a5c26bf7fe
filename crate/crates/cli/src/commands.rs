use anyhow::{bail, Context as _};
use clap::Args;
use kapteyn_acceptance::{run_suite, CommandRunner};
use kapteyn_core::growth::{format_sweep, GrowthProbe};
use kapteyn_core::height::{lagrange_radius, trace_boundary};
use kapteyn_core::phase::{render_with, Overlays, PhaseImage, RenderOptions};
use kapteyn_core::series::convergence_level;
use kapteyn_core::zeros::{find_zeros, predicted_density, sector_density, SectorOptions, DEFAULT_MAX_DEPTH};
use kapteyn_core::{Section, SeriesSpec, WindowBox};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub struct Context {
    pub seed: Option<u64>,
}

fn parse_window(s: &str) -> Result<WindowBox, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}`")))
        .collect::<Result<_, _>>()?;
    let [a, b, c, d] = v[..] else {
        return Err("expected re_min,im_min,re_max,im_max".into());
    };
    WindowBox::from_bounds(a, b, c, d).map_err(|e| e.to_string())
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once('x').ok_or("expected WIDTHxHEIGHT")?;
    let w = w.parse::<usize>().map_err(|e| e.to_string())?;
    let h = h.parse::<usize>().map_err(|e| e.to_string())?;
    if w == 0 || h == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok((w, h))
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    /// Series config file
    config: PathBuf,
    /// Truncation index; defaults to the config's `n`
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value = "-2,-2,2,2", value_parser = parse_window, allow_hyphen_values = true)]
    window: WindowBox,
    #[arg(long, default_value = "512x512", value_parser = parse_dims)]
    size: (usize, usize),
    /// Draw the boundary of {height < r}; a number or `level` for the
    /// configured or estimated convergence level. Repeatable.
    #[arg(long)]
    boundary: Vec<String>,
    /// Locate zeros first and mark them
    #[arg(long)]
    zeros: bool,
    /// Modulus shading
    #[arg(long)]
    shading: bool,
    /// Marching-squares cells per side for boundaries
    #[arg(long, default_value_t = 400)]
    resolution: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    /// Output path; `.png` writes PNG, anything else binary PPM, `-` stdout
    #[arg(long, short, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value = "-2,-2,2,2", value_parser = parse_window, allow_hyphen_values = true)]
    window: WindowBox,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    #[arg(long, short, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    /// Series config file
    config: PathBuf,
    #[arg(long, default_value = "-2,-2,2,2", value_parser = parse_window, allow_hyphen_values = true)]
    window: WindowBox,
    #[arg(long, default_value = "8x8", value_parser = parse_dims)]
    grid: (usize, usize),
    #[arg(long, default_value_t = 256)]
    n_max: usize,
    #[arg(long, short, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Sector direction in radians
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Sector half-angle in radians
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    r_max: f64,
    /// Number of equally spaced radii up to r_max
    #[arg(long, default_value_t = 10)]
    r_steps: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    #[arg(long, short, default_value = "-")]
    out: String,
}

fn is_seed_line(line: &str) -> bool {
    line.split('#').next().and_then(|l| l.split_once('=')).is_some_and(|(k, _)| k.trim() == "seed")
}

/// Config text with `--seed` applied.
fn config_text(ctx: &Context, path: &Path) -> anyhow::Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(match ctx.seed {
        Some(seed) => {
            let mut out: String = text.lines().filter(|l| !is_seed_line(l)).flat_map(|l| [l, "\n"]).collect();
            out.push_str(&format!("seed = {seed}\n"));
            out
        }
        None => text,
    })
}

fn load_spec(ctx: &Context, path: &Path) -> anyhow::Result<(SeriesSpec, Option<usize>)> {
    let text = config_text(ctx, path)?;
    let spec = SeriesSpec::from_config(&text).map_err(|e| match e {
        kapteyn_core::series::ConfigError::MissingKey("seed") => anyhow::anyhow!("random coefficients need --seed or a `seed` key"),
        e => anyhow::Error::from(e),
    });
    let spec = spec.with_context(|| format!("in {}", path.display()))?;
    Ok((spec, SeriesSpec::config_degree(&text)?))
}

fn load_section(ctx: &Context, args: &SpecArgs) -> anyhow::Result<(SeriesSpec, Section, usize)> {
    let (spec, degree) = load_spec(ctx, &args.config)?;
    let Some(n) = args.n.or(degree) else {
        bail!("no truncation index: pass --n or set `n` in the config");
    };
    let section = spec.section(n)?;
    Ok((spec, section, n))
}

fn one_line(spec: &SeriesSpec) -> String {
    spec.to_config().lines().collect::<Vec<_>>().join("; ")
}

fn label(spec: &SeriesSpec, n: usize) -> String {
    format!("{}; n = {n}", one_line(spec))
}

fn emit(out: &str, bytes: &[u8]) -> anyhow::Result<()> {
    if out == "-" {
        let mut stdout = io::stdout().lock();
        stdout.write_all(bytes)?;
        stdout.flush()?;
    } else {
        fs::write(out, bytes).with_context(|| format!("writing {out}"))?;
    }
    Ok(())
}

fn write_image(image: &PhaseImage, out: &str) -> anyhow::Result<()> {
    if out.to_ascii_lowercase().ends_with(".png") {
        let raw: Vec<u8> = image.pixels.iter().flatten().copied().collect();
        let buf = image::RgbImage::from_raw(image.width as u32, image.height as u32, raw).context("image buffer size")?;
        buf.save(out).with_context(|| format!("writing {out}"))?;
        Ok(())
    } else {
        emit(out, &image.to_p6())
    }
}

fn boundary_level(spec: &SeriesSpec, token: &str) -> anyhow::Result<f64> {
    if token == "level" {
        return match spec.level {
            Some(l) => Ok(l),
            None => Ok(convergence_level(spec, 256)?),
        };
    }
    token.parse::<f64>().with_context(|| format!("bad boundary level `{token}`"))
}

pub fn plot(ctx: &Context, a: &PlotArgs) -> anyhow::Result<ExitCode> {
    let (spec, section, _) = load_section(ctx, &a.spec)?;
    let mut overlays = Overlays::default();
    for token in &a.boundary {
        let level = boundary_level(&spec, token)?;
        if level.is_finite() {
            overlays.boundaries.extend(trace_boundary(spec.family, level, &a.window, a.resolution)?);
        }
    }
    if a.zeros {
        overlays.zeros = find_zeros(&section, &a.window, a.max_depth)?.points();
    }
    let options = RenderOptions { modulus_shading: a.shading };
    let image = render_with(&section, &a.window, a.size.0, a.size.1, &overlays, options)?;
    write_image(&image, &a.out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn zeros(ctx: &Context, a: &ZerosArgs) -> anyhow::Result<ExitCode> {
    let (spec, section, n) = load_section(ctx, &a.spec)?;
    let report = find_zeros(&section, &a.window, a.max_depth)?.with_label(label(&spec, n));
    emit(&a.out, report.to_string().as_bytes())?;
    if report.unresolved.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("kapteyn: {} unresolved boxes", report.unresolved.len());
        Ok(ExitCode::from(2))
    }
}

pub fn growth(ctx: &Context, a: &GrowthArgs) -> anyhow::Result<ExitCode> {
    let (spec, _) = load_spec(ctx, &a.config)?;
    let probe = GrowthProbe::new(&spec, a.n_max)?;
    let sweep = probe.sweep_grid(&a.window, a.grid.0, a.grid.1)?;
    let mut text = format!("# spec {}\n# rho {}\n# n_max {}\n", one_line(&spec), probe.rho(), a.n_max);
    text.push_str(&format_sweep(&sweep));
    emit(&a.out, text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

pub fn density(ctx: &Context, a: &DensityArgs) -> anyhow::Result<ExitCode> {
    let (spec, section, n) = load_section(ctx, &a.spec)?;
    if a.r_steps < 2 || !(a.r_max > 0.0) {
        bail!("need --r-max > 0 and --r-steps >= 2");
    }
    let r_values: Vec<f64> = (1..=a.r_steps).map(|k| a.r_max * k as f64 / a.r_steps as f64).collect();
    let options = SectorOptions { max_depth: a.max_depth, ..SectorOptions::default() };
    let d = sector_density(&section, a.theta, a.delta, &r_values, options)?;
    let mut text = format!("# sector-density\n# spec {}\n", label(&spec, n));
    text.push_str(&format!("theta {}\ndelta {}\nn {n}\n", d.theta, d.delta));
    text.push_str(&format!("slope {}\nflank_slopes {} {}\n", d.slope, d.flank_slopes.0, d.flank_slopes.1));
    text.push_str(&format!("predicted {}\nunresolved {}\n", predicted_density(&section, a.theta), d.report.unresolved.len()));
    text.push_str("# r count\n");
    for (r, c) in d.r_values.iter().zip(&d.counts) {
        text.push_str(&format!("{r} {c}\n"));
    }
    emit(&a.out, text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

/// `x` to six significant digits.
fn six_digits(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn radius(mean_anomaly: f64) -> anyhow::Result<ExitCode> {
    println!("{}", six_digits(lagrange_radius(mean_anomaly)?));
    Ok(ExitCode::SUCCESS)
}

struct SelfRunner;

impl CommandRunner for SelfRunner {
    fn run(&self, args: &[String]) -> Result<Vec<u8>, String> {
        let exe = std::env::current_exe().map_err(|e| e.to_string())?;
        let out = std::process::Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{}: {}", out.status, String::from_utf8_lossy(&out.stderr).trim()));
        }
        Ok(out.stdout)
    }
}

pub fn verify(suite: &str) -> anyhow::Result<ExitCode> {
    let outcomes = run_suite(suite, Some(&SelfRunner), |o| println!("{o}"))?;
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} passed", outcomes.len());
    Ok(if passed == outcomes.len() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(six_digits(0.6627434193), "0.662743");
        assert_eq!(six_digits(0.848894), "0.848894");
        assert_eq!(six_digits(12.3456789), "12.3457");
        assert_eq!(six_digits(123456789.0), "123456789");
    }

    #[test]
    fn window_and_dims() {
        let w = parse_window("-1,-2,3,4").unwrap();
        assert_eq!(w.width(), 4.0);
        assert!(parse_window("1,2,3").is_err());
        assert!(parse_window("1,1,0,2").is_err());
        assert_eq!(parse_dims("64x32").unwrap(), (64, 32));
        assert!(parse_dims("0x3").is_err());
    }

    #[test]
    fn seed_override() {
        assert!(is_seed_line("seed = 4 # comment"));
        assert!(!is_seed_line("# seed = 4"));
        assert!(!is_seed_line("real = true"));
    }
}
