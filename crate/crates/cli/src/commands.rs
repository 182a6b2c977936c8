use serde_json::Value;

use splice_core::domains::{
    box_product, build_split, centers_halflengths, complement_domain_with_tolerance, SegmentUnion, HYPOTHESIS_TOLERANCE,
};
use splice_core::frame_analysis::{
    complement_frequencies, frame_bounds, gram, hermitian_eigenvalues, modulation_defect, transported_gram_check,
};
use splice_core::rational::{format_rational, integer_quotient, to_f64};
use splice_core::sequences::{period_of, separation_gap, weyl_average, FrequencySet, ScaleParameter};
use splice_core::stability::{stability_check, stability_linearized, Deviations};
use splice_core::tensor::{product_bounds, product_frequencies, product_gram};
use splice_core::Rational;

use crate::report::{csv_num, num, nums, Obj};
use crate::spec::{beta_json, load_text, validate_spec, AxisSpec, DomainSpec};
use crate::{Command, Failure, EXIT_HYPOTHESIS, EXIT_OK};

/// Default tolerance for the monotonicity of finite-section bounds.
const INTERLACING_TOLERANCE: f64 = 1e-12;

/// Largest product Gram order that is eigensolved densely.
const MAX_DENSE_ORDER: usize = 2500;

pub(crate) struct Output {
    pub command: &'static str,
    pub inputs: Value,
    pub tolerances: Value,
    pub result: Value,
    pub csv: Option<String>,
    pub status: i32,
}

pub(crate) fn dispatch(cmd: &Command, tolerance: Option<f64>) -> Result<Output, Failure> {
    match cmd {
        Command::Sequence { beta, window } => sequence(beta, *window),
        Command::Domain { spec } => domain(spec),
        Command::Gram { spec, beta, window } => gram_cmd(spec.as_deref(), beta.as_deref(), *window),
        Command::FrameBounds { spec, beta, schedule } => {
            bounds_cmd(spec.as_deref(), beta.as_deref(), schedule, tolerance.unwrap_or(INTERLACING_TOLERANCE))
        }
        Command::ModulationCheck { spec, beta, window } => {
            modulation(spec, beta.as_deref(), *window, tolerance.unwrap_or(HYPOTHESIS_TOLERANCE))
        }
        Command::Complement { spec, beta, window } => {
            complement(spec, beta.as_deref(), *window, tolerance.unwrap_or(HYPOTHESIS_TOLERANCE))
        }
        Command::Stability { spec, envelope, beta, window } => stability(spec, *envelope, beta.as_deref(), *window),
        Command::Tensor { spec, beta, window } => tensor(spec, beta.as_deref(), *window),
        Command::Weyl { beta, count } => weyl(beta, *count),
    }
}

fn load_spec(arg: &str) -> Result<DomainSpec, Failure> {
    let text = load_text(arg).map_err(Failure::usage)?;
    validate_spec(&text).map_err(|errs| Failure::usage(format!("invalid spec: {}", errs.join("; "))))
}

fn parse_beta(text: &str) -> Result<ScaleParameter, Failure> {
    text.parse::<ScaleParameter>().map_err(|e| Failure::usage(e.to_string()))
}

fn resolve_beta(flag: Option<&str>, axis: Option<&AxisSpec>) -> Result<ScaleParameter, Failure> {
    match (flag, axis.and_then(|a| a.beta)) {
        (Some(text), _) => parse_beta(text),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(Failure::usage("no scale parameter: pass --beta or set \"beta\" in the spec")),
    }
}

fn rational_or_num(exact: Option<Rational>, approx: f64) -> Value {
    match exact {
        Some(r) => Value::String(format_rational(&r)),
        None => num(approx),
    }
}

fn segments_json(d: &SegmentUnion) -> Value {
    let exact = d.exact_segments();
    d.segments()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let e = exact.map(|x| x[i]);
            Obj::new()
                .put("start", rational_or_num(e.map(|p| p.0), s.start))
                .put("end", rational_or_num(e.map(|p| p.1), s.end))
                .build()
        })
        .collect()
}

fn extremes(spectrum: &[f64]) -> (f64, f64) {
    (spectrum.first().copied().unwrap_or(f64::NAN), spectrum.last().copied().unwrap_or(f64::NAN))
}

fn sequence(beta: &str, window: usize) -> Result<Output, Failure> {
    let beta = parse_beta(beta)?;
    let fs = FrequencySet::star(beta, window)?;
    let exact = beta.is_exact();
    let mut csv = String::from(if exact { "n,delta_star,lambda,delta_star_exact,lambda_exact\n" } else { "n,delta_star,lambda\n" });
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs.entries() {
        let dev = f.deviation.unwrap_or(f.lambda - f.index as f64);
        let mut row = Obj::new().put("n", f.index).float("delta_star", dev).float("lambda", f.lambda);
        csv.push_str(&format!("{},{},{}", f.index, csv_num(dev), csv_num(f.lambda)));
        if let (Some(ed), Some(el)) = (f.exact_deviation, f.exact) {
            row = row.put("delta_star_exact", format_rational(&ed)).put("lambda_exact", format_rational(&el));
            csv.push_str(&format!(",{},{}", format_rational(&ed), format_rational(&el)));
        }
        csv.push('\n');
        rows.push(row.build());
    }
    let result = Obj::new()
        .put("count", fs.len())
        .put("period", period_of(&beta).ok())
        .float("sup_deviation", fs.sup_deviation().unwrap_or(0.0))
        .float("separation", separation_gap(&fs))
        .put("rows", rows)
        .build();
    Ok(Output {
        command: "sequence",
        inputs: Obj::new().put("beta", beta_json(&beta)).put("window", window).build(),
        tolerances: Obj::new().float("snap", splice_core::sequences::SNAP_TOLERANCE).build(),
        result,
        csv: Some(csv),
        status: EXIT_OK,
    })
}

fn domain(spec_arg: &str) -> Result<Output, Failure> {
    let spec = load_spec(spec_arg)?;
    let mut csv = String::from("axis,segment,start,end\n");
    let mut axes = Vec::new();
    for (k, axis) in spec.axes().iter().enumerate() {
        let j = build_split(&axis.split)?;
        for (i, s) in j.segments().iter().enumerate() {
            csv.push_str(&format!("{k},{i},{},{}\n", csv_num(s.start), csv_num(s.end)));
        }
        let pieces: Vec<Value> = centers_halflengths(&axis.split)
            .iter()
            .map(|c| {
                Obj::new()
                    .put("center", format_rational(&c.center))
                    .put("half_length", format_rational(&c.half_length))
                    .build()
            })
            .collect();
        axes.push(
            Obj::new()
                .put("segments", segments_json(&j))
                .put("measure", rational_or_num(j.exact_measure(), j.measure()))
                .put("pieces", pieces)
                .build(),
        );
    }
    let result = Obj::new().put("valid", true).put("spec", spec.to_json()).put("axes", axes).build();
    Ok(Output {
        command: "domain",
        inputs: Obj::new().put("spec", spec.to_json()).build(),
        tolerances: Obj::new().build(),
        result,
        csv: Some(csv),
        status: EXIT_OK,
    })
}

/// Domain from an optional single-axis spec, defaulting to `[0, 1)`.
fn optional_domain(spec_arg: Option<&str>) -> Result<(Option<AxisSpec>, SegmentUnion, Value), Failure> {
    match spec_arg {
        Some(arg) => {
            let spec = load_spec(arg)?;
            let axis = spec.single().map_err(Failure::usage)?.clone();
            let j = build_split(&axis.split)?;
            Ok((Some(axis), j, spec.to_json()))
        }
        None => Ok((None, SegmentUnion::unit_interval(), Value::Null)),
    }
}

fn gram_cmd(spec_arg: Option<&str>, beta: Option<&str>, window: usize) -> Result<Output, Failure> {
    let (axis, d, spec_json) = optional_domain(spec_arg)?;
    let beta = resolve_beta(beta, axis.as_ref())?;
    let fs = FrequencySet::star(beta, window)?;
    let g = gram(&fs, &d);
    let spectrum = hermitian_eigenvalues(&g)?;
    let (lo, hi) = extremes(&spectrum);
    let entries: Vec<Value> = g.entries().iter().map(|z| Value::Array(vec![num(z.re), num(z.im)])).collect();
    let result = Obj::new()
        .put("order", g.order())
        .float("measure", g.measure())
        .float("hermitian_defect", g.hermitian_defect())
        .float("trace", g.trace())
        .float("lambda_min", lo)
        .float("lambda_max", hi)
        .put("indices", g.indices().to_vec())
        .put("entries", entries)
        .build();
    Ok(Output {
        command: "gram",
        inputs: Obj::new().put("spec", spec_json).put("beta", beta_json(&beta)).put("window", window).build(),
        tolerances: Obj::new().build(),
        result,
        csv: Some(g.to_dump()),
        status: EXIT_OK,
    })
}

fn parse_schedule(text: &str) -> Result<Vec<usize>, Failure> {
    let schedule: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("schedule must be comma-separated integers, got {text:?}")))?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::usage(format!("schedule must be strictly increasing, got {text:?}")));
    }
    Ok(schedule)
}

fn bounds_cmd(spec_arg: Option<&str>, beta: Option<&str>, schedule: &str, tol: f64) -> Result<Output, Failure> {
    let schedule = parse_schedule(schedule)?;
    let (axis, d, spec_json) = optional_domain(spec_arg)?;
    let beta = resolve_beta(beta, axis.as_ref())?;
    let est = frame_bounds(|n| FrequencySet::star(beta, n), &d, &schedule)?;
    let series: Vec<Value> = est
        .series
        .iter()
        .map(|p| Obj::new().put("N", p.window).float("lambda_min", p.lambda_min).float("lambda_max", p.lambda_max).build())
        .collect();
    let result = Obj::new().put("series", series).put("interlaced", est.is_interlaced(tol)).build();
    Ok(Output {
        command: "frame-bounds",
        inputs: Obj::new().put("spec", spec_json).put("beta", beta_json(&beta)).put("schedule", schedule).build(),
        tolerances: Obj::new().float("interlacing", tol).build(),
        result,
        csv: Some(est.to_csv()),
        status: EXIT_OK,
    })
}

/// `b/β` for each gap and whether it is an integer (exactly, or within
/// `tol` for a real scale).
fn gap_ratios(axis: &AxisSpec, beta: &ScaleParameter, tol: f64) -> (Vec<Value>, bool) {
    let mut all = true;
    let rows = axis
        .split
        .gaps()
        .iter()
        .map(|b| {
            let (ratio, integral) = match beta.as_rational() {
                Some(r) => (Value::String(format_rational(&(b / r))), integer_quotient(b, &r).is_some()),
                None => {
                    let x = to_f64(b) / beta.value();
                    (num(x), (x - x.round()).abs() <= tol * x.abs().max(1.0))
                }
            };
            all &= integral;
            Obj::new().put("gap", format_rational(b)).put("gap_over_beta", ratio).put("integer", integral).build()
        })
        .collect();
    (rows, all)
}

fn modulation(spec_arg: &str, beta: Option<&str>, window: usize, tol: f64) -> Result<Output, Failure> {
    let spec = load_spec(spec_arg)?;
    let axis = spec.single().map_err(Failure::usage)?;
    let beta = resolve_beta(beta, Some(axis))?;
    let fs = FrequencySet::star(beta, window)?;
    let defect = modulation_defect(&fs, axis.split.gaps());
    let (ratios, aligned) = gap_ratios(axis, &beta, tol);
    let transport = transported_gram_check(&axis.split, &fs)?;
    let j = build_split(&axis.split)?;
    let split_vs_unit = gram(&fs, &j).max_abs_diff(&gram(&fs, &SegmentUnion::unit_interval()))?;
    let holds = aligned && defect <= tol;
    let result = Obj::new()
        .put("hypothesis_holds", holds)
        .float("modulation_defect", defect)
        .put("gaps", ratios)
        .float("transported_gram_deviation", transport.max_deviation)
        .float("split_vs_unit_gram_deviation", split_vs_unit)
        .put("order", transport.order)
        .build();
    Ok(Output {
        command: "modulation-check",
        inputs: Obj::new().put("spec", spec.to_json()).put("beta", beta_json(&beta)).put("window", window).build(),
        tolerances: Obj::new().float("hypothesis", tol).build(),
        result,
        csv: None,
        status: if holds { EXIT_OK } else { EXIT_HYPOTHESIS },
    })
}

fn complement(spec_arg: &str, beta: Option<&str>, window: Option<usize>, tol: f64) -> Result<Output, Failure> {
    let spec = load_spec(spec_arg)?;
    let axis = spec.single().map_err(Failure::usage)?;
    let beta = resolve_beta(beta, Some(axis))?;
    let c = complement_domain_with_tolerance(&axis.split, &beta, tol)?;
    let mut result = Obj::new()
        .put("delta", rational_or_num(c.delta_exact, c.delta))
        .put("delta_over_beta", num(c.delta / beta.value()).as_f64().map(|x| x.round() as i64))
        .put("segments", segments_json(&c.domain))
        .put("measure", rational_or_num(c.domain.exact_measure(), c.domain.measure()));
    if let Some(w) = window {
        let delta = c
            .delta_exact
            .ok_or_else(|| Failure::usage("the complement lattice system needs an exact rational beta"))?;
        let fs = complement_frequencies(&beta, delta, w)?;
        let (lo, hi) = if fs.is_empty() { (f64::NAN, f64::NAN) } else { extremes(&hermitian_eigenvalues(&gram(&fs, &c.domain))?) };
        result = result
            .put("frequency_count", fs.len())
            .float("lambda_min", lo)
            .float("lambda_max", hi);
    }
    Ok(Output {
        command: "complement",
        inputs: Obj::new()
            .put("spec", spec.to_json())
            .put("beta", beta_json(&beta))
            .put("window", window)
            .build(),
        tolerances: Obj::new().float("hypothesis", tol).build(),
        result: result.build(),
        csv: None,
        status: EXIT_OK,
    })
}

fn stability(spec_arg: &str, envelope: Option<f64>, beta: Option<&str>, window: usize) -> Result<Output, Failure> {
    let spec = load_spec(spec_arg)?;
    let axis = spec.single().map_err(Failure::usage)?;
    let gaps: Vec<u64> = axis
        .split
        .gaps()
        .iter()
        .map(|g| {
            g.is_integer().then(|| g.to_integer() as u64).ok_or_else(|| Failure {
                code: EXIT_HYPOTHESIS,
                message: format!("gap {} is not an integer", format_rational(g)),
            })
        })
        .collect::<Result<_, _>>()?;
    let gammas: Vec<f64> = centers_halflengths(&axis.split).iter().map(|c| to_f64(&c.half_length)).collect();
    let (deviations, mode, inputs) = match envelope {
        Some(l) => (Deviations::Envelope(l), "envelope", Obj::new().float("envelope", l)),
        None => {
            let beta = resolve_beta(beta, Some(axis))?;
            let fs = FrequencySet::star(beta, window)?;
            let devs = fs.entries().iter().map(|f| f.deviation.unwrap_or(0.0)).collect();
            (Deviations::Explicit(devs), "explicit", Obj::new().put("beta", beta_json(&beta)).put("window", window))
        }
    };
    let m = axis.split.segment_count();
    let r = stability_check(m, &gammas, &gaps, &deviations)?;
    let dists: Vec<f64> = gaps.iter().map(|g| deviations.worst_distance(*g)).collect();
    let linearized = stability_linearized(m, &gammas, &gaps, r.sup_deviation, &dists)?;
    let result = Obj::new()
        .put("satisfied", r.satisfied)
        .put("linearized", linearized)
        .put("mode", mode)
        .put("segments", r.segments)
        .put("half_lengths", nums(&gammas))
        .put("gaps", gaps.clone())
        .float("sup_deviation", r.sup_deviation)
        .float("A", r.a)
        .put("B_gamma", nums(&r.b_gamma))
        .put("margins", nums(&r.margins))
        .float("lhs", r.lhs)
        .float("rhs", r.rhs)
        .build();
    Ok(Output {
        command: "stability",
        inputs: inputs.put("spec", spec.to_json()).build(),
        tolerances: Obj::new().build(),
        result,
        csv: None,
        status: if r.satisfied { EXIT_OK } else { EXIT_HYPOTHESIS },
    })
}

fn tensor(spec_arg: &str, beta: Option<&str>, window: usize) -> Result<Output, Failure> {
    let spec = load_spec(spec_arg)?;
    let axes = spec.axes();
    let betas: Vec<ScaleParameter> = match beta {
        Some(text) => {
            let parsed: Vec<ScaleParameter> = text.split(',').map(parse_beta).collect::<Result<_, _>>()?;
            match parsed.len() {
                1 => vec![parsed[0]; axes.len()],
                n if n == axes.len() => parsed,
                n => return Err(Failure::usage(format!("{n} scales given for {} axes", axes.len()))),
            }
        }
        None => axes.iter().map(|a| resolve_beta(None, Some(a))).collect::<Result<_, _>>()?,
    };
    let pfs = product_frequencies(&betas, window)?;
    let cube = box_product(&axes.iter().map(|a| a.split.clone()).collect::<Vec<_>>())?;
    let mut axis_spectra = Vec::new();
    for (f, d) in pfs.factors().iter().zip(cube.axis_domains()) {
        axis_spectra.push(hermitian_eigenvalues(&gram(f, d))?);
    }
    let axis_bounds: Vec<(f64, f64)> = axis_spectra.iter().map(|s| extremes(s)).collect();
    let (pa, pb) = product_bounds(&axis_bounds)?;
    let order = pfs.len();
    let product_spectrum = if order <= MAX_DENSE_ORDER {
        let spectrum = hermitian_eigenvalues(&product_gram(&pfs, &cube)?)?;
        let mut expected = vec![1.0];
        for s in &axis_spectra {
            expected = expected.iter().flat_map(|a| s.iter().map(move |b| a * b)).collect();
        }
        expected.sort_by(|a, b| a.total_cmp(b));
        let dev = spectrum.iter().zip(&expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let (lo, hi) = extremes(&spectrum);
        Obj::new()
            .float("lambda_min", lo)
            .float("lambda_max", hi)
            .float("max_deviation_from_axis_products", dev)
            .build()
    } else {
        Value::Null
    };
    let result = Obj::new()
        .put("dim", pfs.dim())
        .put("order", order)
        .float("volume", cube.volume())
        .put(
            "axis_bounds",
            axis_bounds
                .iter()
                .map(|(a, b)| Obj::new().float("lambda_min", *a).float("lambda_max", *b).build())
                .collect::<Vec<_>>(),
        )
        .put("product_bounds", Obj::new().float("lambda_min", pa).float("lambda_max", pb).build())
        .put("product_spectrum", product_spectrum)
        .build();
    Ok(Output {
        command: "tensor",
        inputs: Obj::new()
            .put("spec", spec.to_json())
            .put("betas", betas.iter().map(beta_json).collect::<Vec<_>>())
            .put("window", window)
            .build(),
        tolerances: Obj::new().build(),
        result,
        csv: None,
        status: EXIT_OK,
    })
}

fn weyl(beta: &str, count: usize) -> Result<Output, Failure> {
    let beta = parse_beta(beta)?;
    let avg = weyl_average(&beta, count)?;
    Ok(Output {
        command: "weyl",
        inputs: Obj::new().put("beta", beta_json(&beta)).put("count", count).build(),
        tolerances: Obj::new().build(),
        result: Obj::new().float("average", avg).build(),
        csv: None,
        status: EXIT_OK,
    })
}
