use crate::{read_input, Cli, CliError, CliResult, Command};
use serde::Serialize;
use serde_json::{json, Value};
use umbra_core::borel::{
    formal_borel, formal_borel_shifted, numeric_laplace_detailed, resum_with, Direction,
    LaplaceOptions, ResumOptions,
};
use umbra_core::gaussian::{gaussian_fourier, gaussian_fourier_input, FourierInput, FtVerdict};
use umbra_core::gevrey::{estimate_gevrey_index, estimate_gevrey_index_with};
use umbra_core::series::{exp_series, geometric_series, FormalSeries};
use umbra_core::special::OracleConfig;
use umbra_core::summation::sum_series;
use umbra_core::umbral::{umbral_image, GroundState};
use umbra_core::verify::run_all_with;
use umbra_core::{Complex64, UmbraError};

type C64 = Complex64;

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected re or re,im, got {s:?}")),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

pub fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let lo = lo.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if lo >= hi {
        return Err(format!("window {lo},{hi} is empty"));
    }
    Ok((lo, hi))
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Math(UmbraError::InvalidArgument(msg.into()))
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && !v.is_nan() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

fn min_truncation(n: usize) -> CliResult<usize> {
    if n >= 4 {
        Ok(n)
    } else {
        Err(invalid(format!("N must be at least 4, got {n}")))
    }
}

fn parse_series(text: &str) -> CliResult<FormalSeries> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("series JSON: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Io(e.to_string()))
}

fn sample(t: C64, v: C64) -> [f64; 4] {
    [t.re, t.im, v.re, v.im]
}

/// Runs the subcommand; returns the result JSON and the exit status.
pub fn run(cli: &Cli) -> CliResult<(Value, u8)> {
    let value = match &cli.command {
        Command::Classify(a) => {
            let s = parse_series(&read_input(&cli.input)?)?;
            let rep =
                estimate_gevrey_index_with(&s, a.window, positive("threshold", a.threshold)?)?;
            to_value(&rep)?
        }
        Command::Borel(a) => {
            let s = parse_series(&read_input(&cli.input)?)?;
            let b = match a.beta {
                Some(beta) if beta != C64::new(1.0, 0.0) => formal_borel_shifted(&s, a.k, beta)?,
                _ => formal_borel(&s, a.k)?,
            };
            to_value(&b)?
        }
        Command::Laplace(a) => {
            let p = parse_series(&read_input(&cli.input)?)?;
            let opts = LaplaceOptions {
                tol: positive("tol", a.tol)?,
                ..LaplaceOptions::default()
            };
            let mut samples = Vec::new();
            let mut methods = Vec::new();
            for &t in &a.t {
                let dir = Direction::new(a.theta.unwrap_or(t.arg()));
                let v = numeric_laplace_detailed(&|z| p.eval(z), a.k, a.beta, t, dir, &opts)?;
                samples.push(sample(t, v.value));
                methods.push(json!({"method": v.method, "error_estimate": v.error_estimate}));
            }
            json!({"k": a.k, "beta": [a.beta.re, a.beta.im], "samples": samples, "quadrature": methods})
        }
        Command::Resum(a) => return resum_command(cli, a),
        Command::Umbral(a) => {
            let n = min_truncation(a.n)?;
            let f = match a.f.as_str() {
                "exp" => exp_series(C64::new(1.0, 0.0), n),
                "expneg" => exp_series(C64::new(-1.0, 0.0), n),
                "expi" => exp_series(C64::i(), n),
                "geom" => geometric_series(C64::new(1.0, 0.0), n),
                "geom-alt" => geometric_series(C64::new(-1.0, 0.0), n),
                "custom-json" => parse_series(&read_input(&cli.input)?)?,
                other => return Err(invalid(format!("unknown series {other:?}"))),
            };
            let ground = parse_ground(&a.ground, a.ground_radius)?;
            let image = umbral_image(&f, a.mu, &ground)?;
            let gevrey = match estimate_gevrey_index(&image, None) {
                Ok(r) => to_value(&r)?,
                Err(e @ UmbraError::InsufficientData { .. }) => {
                    eprintln!("note: no Gevrey fit: {e}");
                    Value::Null
                }
                Err(e) => return Err(e.into()),
            };
            json!({"ground": ground.to_string(), "mu": a.mu, "series": to_value(&image)?, "gevrey": gevrey})
        }
        Command::Gaussft(a) => {
            let res = match a.spec.as_str() {
                "custom-json" => {
                    gaussian_fourier(&parse_series(&read_input(&cli.input)?)?, a.k, a.resum)?
                }
                spec => {
                    let input = parse_fourier_input(spec)?;
                    let default_n = if matches!(input, FourierInput::Gaussian { .. }) {
                        400
                    } else {
                        120
                    };
                    gaussian_fourier_input(
                        &input,
                        min_truncation(a.n.unwrap_or(default_n))?,
                        a.k,
                        a.resum,
                    )?
                }
            };
            if let (FtVerdict::Divergent { sigma }, false) = (res.verdict, a.resum) {
                return Err(CliError::Domain {
                    code: "DivergentSeries",
                    detail: format!(
                        "series is Gevrey divergent (sigma = {sigma:.4}); pass --resum"
                    ),
                });
            }
            to_value(&res)?
        }
        Command::Verify(_) => return verify_command(),
    };
    Ok((value, 0))
}

fn resum_command(cli: &Cli, a: &crate::ResumArgs) -> CliResult<(Value, u8)> {
    let s = parse_series(&read_input(&cli.input)?)?;
    let convergent = estimate_gevrey_index(&s, None)
        .map(|r| r.is_convergent())
        .unwrap_or(false);
    if convergent && !a.force {
        eprintln!(
            "warning: series is convergent class; returning its direct sum (use --force to resum)"
        );
        let mut samples = Vec::new();
        let mut methods = Vec::new();
        for &t in &a.t {
            let v = sum_series(&s, t)?;
            samples.push(sample(t, v.value));
            methods.push(v.method);
        }
        let v = json!({"warning": "convergent series summed directly", "samples": samples, "summation": methods});
        return Ok((v, 0));
    }
    let opts = ResumOptions {
        delta_ray: positive("delta-ray", a.delta_ray)?,
        ..ResumOptions::default()
    };
    let sum = resum_with(&s, a.k, Direction::new(a.theta), a.pade_order, &opts)?;
    let mut samples = Vec::new();
    for &t in &a.t {
        samples.push(sample(t, sum.evaluate(t)?));
    }
    let poles: Vec<[f64; 2]> = sum.pade_poles.iter().map(|p| [p.re, p.im]).collect();
    let v = json!({
        "k": sum.k,
        "theta": sum.direction.theta(),
        "pade_order": sum.pade_order,
        "pade_degrees": sum.pade_degrees,
        "poles": poles,
        "samples": samples,
    });
    Ok((v, 0))
}

fn verify_command() -> CliResult<(Value, u8)> {
    let checks = run_all_with(&OracleConfig::from_env());
    let mut unexpected = false;
    for c in &checks {
        let worst = c
            .worst()
            .map(|m| format!("{:.2e} (tol {:.0e})", m.value, m.tol))
            .unwrap_or_default();
        eprintln!(
            "{:>2} {} {:<42} {worst}",
            c.id,
            if c.pass { "PASS" } else { "FAIL" },
            c.name
        );
        for m in c.measurements.iter().filter(|m| !m.pass) {
            let tag = if m.known_shortfall {
                "known shortfall"
            } else {
                "unexpected"
            };
            eprintln!("     [{tag}] {}", m.label);
        }
        unexpected |= c.unexpected_failures().next().is_some();
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let v = json!({"passed": passed, "total": checks.len(), "checks": to_value(&checks)?});
    Ok((v, if unexpected { 2 } else { 0 }))
}

fn numbers(s: &str, n: usize, what: &str) -> CliResult<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| invalid(format!("{what}: {e}")))?;
    if v.len() != n {
        return Err(invalid(format!(
            "{what} takes {n} parameters, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn parse_ground(s: &str, radius: f64) -> CliResult<GroundState> {
    let (name, params) = s.split_once(':').unwrap_or((s, ""));
    Ok(match name {
        "lambda" => GroundState::lambda(),
        "phi" => {
            let p = numbers(params, 2, "phi")?;
            GroundState::phi(p[0], p[1])?
        }
        "psi" => {
            let p = numbers(params, 3, "psi")?;
            GroundState::psi(p[0], p[1], p[2])?
        }
        "custom" => {
            let text = std::fs::read_to_string(params)
                .map_err(|e| CliError::Io(format!("{params}: {e}")))?;
            GroundState::custom(parse_series(&text)?, radius)?
        }
        other => return Err(invalid(format!("unknown ground state {other:?}"))),
    })
}

fn parse_fourier_input(s: &str) -> CliResult<FourierInput> {
    let (name, param) = s.split_once(':').unwrap_or((s, ""));
    match name {
        "gaussian" => Ok(FourierInput::Gaussian {
            a: numbers(param, 1, "gaussian")?[0],
        }),
        "abs-exp" => Ok(FourierInput::AbsExp),
        "hermite" => Ok(FourierInput::Hermite {
            n: param
                .trim()
                .parse()
                .map_err(|e| invalid(format!("hermite: {e}")))?,
        }),
        other => Err(invalid(format!("unknown input {other:?}"))),
    }
}
