use std::fmt::Write as _;
use std::fs;

use hanoi_core::contraction::{
    check_contraction, equivalence_patterns, moore_diagram, prenucleus, Nucleus,
};
use hanoi_core::fractal::dims::{dimension_table, dimension_table_csv};
use hanoi_core::fractal::energy::{cell_diameter_scaling, level_energy, renormalize, to_f64};
use hanoi_core::fractal::geometry::{attractor_points, build_ifs, build_simplex};
use hanoi_core::networks::hn::{build_hn3, build_hn4, HanoiNetwork};
use hanoi_core::networks::minor::{
    build_minor, check_minor, distortion_report, minor_coordinates, verify_isomorphism,
};
use hanoi_core::networks::states::{build_automaton_network, coordinates_csv};
use hanoi_core::schreier::{root_transitivity, schreier};
use hanoi_core::WeightedGraph;
use serde_json::{json, Value};

use crate::source::{emit, format_or, load_group, parse_k_range, write_file, LoadedGroup};
use crate::{
    CheckArgs, Command, DiskArgs, Failure, Format, FractalCommand, GroupCommand, KRangeArgs,
    LevelArgs, NetCommand, NucleusArgs, RangeArgs, SchreierArgs,
};

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Group(GroupCommand::Check(args)) => group_check(&args),
        Command::Group(GroupCommand::Nucleus(args)) => group_nucleus(&args),
        Command::Group(GroupCommand::Moore(args)) => group_moore(&args),
        Command::Schreier(args) => schreier_graph(&args),
        Command::Fractal(FractalCommand::Dims(args)) => fractal_dims(&args),
        Command::Fractal(FractalCommand::Renorm(args)) => fractal_renorm(&args),
        Command::Fractal(FractalCommand::Resistance(args)) => fractal_resistance(&args),
        Command::Fractal(FractalCommand::Points(args)) => fractal_points(&args),
        Command::Net(NetCommand::Hn3(args)) => net_hn(&args, false),
        Command::Net(NetCommand::Hn4(args)) => net_hn(&args, true),
        Command::Net(NetCommand::Automaton(args)) => net_automaton(&args),
        Command::Net(NetCommand::Minor(args)) => net_minor(&args),
        Command::Net(NetCommand::Verify(args)) => net_verify(&args),
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn graph_json(graph: &WeightedGraph) -> Value {
    json!({
        "directed": graph.is_directed(),
        "nodes": graph.labels(),
        "edges": graph.edges().iter().map(|e| json!({
            "u": graph.label(e.u),
            "v": graph.label(e.v),
            "length": e.length,
            "label": e.label,
            "kind": e.kind,
        })).collect::<Vec<_>>(),
    })
}

fn group_check(args: &CheckArgs) -> Result<(), Failure> {
    let LoadedGroup { name, set } = load_group(&args.source)?;
    let format = format_or(&args.output, Format::Text, &[Format::Text, Format::Json])?;
    let report = check_contraction(&set, args.depth);
    let text = match format {
        Format::Json => pretty(&json!({
            "group": name,
            "k": set.k(),
            "generators": set.generators().iter().map(|g| &g.name).collect::<Vec<_>>(),
            "contracting": report.contracting,
            "violation": report.violation.as_ref().map(|v| json!({
                "generators": v.names,
                "j": v.j,
                "orbit": v.orbit,
                "essential": v.essential,
            })),
            "witness": report.witness.as_ref().map(|w| json!({
                "word": w.word,
                "i": w.i,
                "j": w.j,
                "n": w.n,
                "m": w.m,
                "verified": w.verify(),
            })),
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "group: {name} (k = {}, {} generators)",
                set.k(),
                set.generators().len()
            );
            let verdict = if report.contracting {
                "contracting"
            } else {
                "non-contracting"
            };
            let _ = writeln!(s, "result: {verdict}");
            if let Some(v) = &report.violation {
                let _ = writeln!(s, "violation: {v}");
            }
            match (&report.witness, report.contracting) {
                (Some(w), _) => {
                    let _ = writeln!(s, "witness: {w} (verified: {})", w.verify());
                }
                (None, false) => {
                    let _ = writeln!(s, "witness: none up to length {}", args.depth);
                }
                _ => {}
            }
            s
        }
    };
    emit(&args.output, &text)?;
    if args.require_contracting && !report.contracting {
        return Err(Failure::NotContracting(format!(
            "{name} is not contracting"
        )));
    }
    Ok(())
}

fn contracting_nucleus(args: &NucleusArgs) -> Result<(LoadedGroup, Nucleus), Failure> {
    let group = load_group(&args.source)?;
    if args.cap == 0 {
        return Err(Failure::Usage("--cap must be positive".into()));
    }
    if let Some(v) = hanoi_core::contraction::check_star(&group.set) {
        return Err(Failure::NotContracting(format!(
            "{} is not contracting: {v}",
            group.name
        )));
    }
    let nucleus = prenucleus(&group.set, args.cap)?;
    Ok((group, nucleus))
}

fn patterns_text(nucleus: &Nucleus, cap: usize) -> Result<String, Failure> {
    let (patterns, truncated) = equivalence_patterns(nucleus, cap)?;
    let mut s = String::new();
    for p in patterns.iter().filter(|p| p.is_nontrivial()) {
        let _ = writeln!(s, "{p}");
    }
    if truncated {
        let _ = writeln!(s, "# truncated at {cap} cycles");
    }
    Ok(s)
}

fn group_nucleus(args: &NucleusArgs) -> Result<(), Failure> {
    let format = format_or(
        &args.output,
        Format::Json,
        &[Format::Json, Format::Dot, Format::Text],
    )?;
    let (group, nucleus) = contracting_nucleus(args)?;
    let moore = moore_diagram(&nucleus)?;
    match &args.output.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| {
                Failure::Computation(format!("cannot create {}: {e}", dir.display()))
            })?;
            write_file(
                &dir.join("group.json"),
                &format!("{}\n", group.set.to_json()),
            )?;
            write_file(
                &dir.join("nucleus.json"),
                &format!("{}\n", nucleus.to_json()),
            )?;
            write_file(&dir.join("moore.dot"), &moore.to_dot("moore"))?;
            write_file(&dir.join("patterns.txt"), &patterns_text(&nucleus, 10_000)?)?;
            Ok(())
        }
        None => {
            let text = match format {
                Format::Dot => moore.to_dot("moore"),
                Format::Text => {
                    let mut s = format!("nucleus of {}: {} elements\n", group.name, nucleus.len());
                    for i in 0..nucleus.len() {
                        let _ = writeln!(s, "  {}", nucleus.name(i));
                    }
                    s.push_str("equivalence patterns:\n");
                    s.push_str(&patterns_text(&nucleus, 10_000)?);
                    s
                }
                _ => format!("{}\n", nucleus.to_json()),
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn group_moore(args: &NucleusArgs) -> Result<(), Failure> {
    let format = format_or(
        &args.output,
        Format::Dot,
        &[Format::Dot, Format::Csv, Format::Json],
    )?;
    let (_, nucleus) = contracting_nucleus(args)?;
    let moore = moore_diagram(&nucleus)?;
    let text = match format {
        Format::Csv => moore.to_csv(),
        Format::Json => pretty(&graph_json(&moore)),
        _ => moore.to_dot("moore"),
    };
    emit(&args.output, &text)
}

fn schreier_graph(args: &SchreierArgs) -> Result<(), Failure> {
    let LoadedGroup { name, set } = load_group(&args.source)?;
    let format = format_or(
        &args.output,
        Format::Csv,
        &[Format::Csv, Format::Dot, Format::Json, Format::Text],
    )?;
    let g = schreier(&set, args.n, args.cap)?;
    let (transitive, orbits) = root_transitivity(&set);
    let summary = json!({
        "group": name,
        "k": g.k,
        "n": g.n,
        "vertices": g.vertex_count(),
        "moves": g.move_count(),
        "loops": g.loop_count(),
        "connected": g.is_connected(),
        "diameter": g.diameter(),
        "root_transitive": transitive,
        "root_orbits": orbits,
    });
    let text = match format {
        Format::Dot => g.graph.to_dot(&format!("schreier_{}", args.n)),
        Format::Json => pretty(&summary),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "group: {name}, level {}", g.n);
            let _ = writeln!(s, "vertices: {}", g.vertex_count());
            let _ = writeln!(s, "moves: {}, loops: {}", g.move_count(), g.loop_count());
            let _ = writeln!(s, "connected: {}", g.is_connected());
            if let Some(d) = g.diameter() {
                let _ = writeln!(s, "diameter: {d}");
            }
            let _ = writeln!(s, "root permutations transitive: {transitive}");
            s
        }
        _ => g.to_csv(),
    };
    emit(&args.output, &text)
}

fn fractal_dims(args: &KRangeArgs) -> Result<(), Failure> {
    let format = format_or(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let rows = dimension_table(&parse_k_range(&args.k)?)?;
    let text = match format {
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|r| json!({"k": r.k, "r": r.r, "d_H": r.hausdorff, "d_S": r.spectral}))
            .collect::<Vec<_>>())),
        _ => dimension_table_csv(&rows),
    };
    emit(&args.output, &text)
}

fn fractal_renorm(args: &KRangeArgs) -> Result<(), Failure> {
    let format = format_or(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let mut rows = Vec::new();
    for k in parse_k_range(&args.k)? {
        rows.push(renormalize(k)?);
    }
    let text = match format {
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|hs| json!({
                "k": hs.k,
                "r": hs.r.to_string(),
                "r_decimal": to_f64(hs.r),
                "lambda": hs.lambda,
                "lambda_raw": hs.lambda_raw.to_string(),
                "lambda_raw_measured": hs.lambda_raw_numeric,
                "residual": hs.residual,
                "trace": (0..hs.k)
                    .map(|i| (0..hs.k).map(|j| hs.schur_raw[(i, j)]).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())),
        _ => {
            let mut s = String::from("k,r,r_decimal,lambda_raw,lambda_raw_measured,residual\n");
            for hs in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{:.15},{},{:.15},{:e}",
                    hs.k,
                    hs.r,
                    to_f64(hs.r),
                    hs.lambda_raw,
                    hs.lambda_raw_numeric,
                    hs.residual
                );
            }
            s
        }
    };
    emit(&args.output, &text)
}

fn fractal_resistance(args: &LevelArgs) -> Result<(), Failure> {
    let format = format_or(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let hs = renormalize(args.k)?;
    let rows = cell_diameter_scaling(&hs, args.m)?;
    let mut boundary = Vec::new();
    for m in 0..=args.m {
        boundary.push(level_energy(&hs, m)?.resistance(0, 1)?);
    }
    let text = match format {
        Format::Json => pretty(&json!({
            "k": args.k,
            "r": hs.r.to_string(),
            "levels": rows.iter().zip(&boundary).map(|(row, b)| json!({
                "m": row.m,
                "boundary_resistance": b,
                "cell_diameter": row.diameter,
                "ratio": row.ratio,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::from("m,boundary_resistance,cell_diameter,ratio\n");
            for (row, b) in rows.iter().zip(&boundary) {
                let ratio = row.ratio.map(|r| format!("{r:.15}")).unwrap_or_default();
                let _ = writeln!(s, "{},{:.15},{:.15},{ratio}", row.m, b, row.diameter);
            }
            s
        }
    };
    emit(&args.output, &text)
}

fn fractal_points(args: &LevelArgs) -> Result<(), Failure> {
    let format = format_or(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let ifs = build_ifs(&build_simplex(args.k)?)?;
    let pts = attractor_points(&ifs, args.m, args.cap)?;
    let text = match format {
        Format::Json => pretty(&json!(pts
            .level
            .points
            .iter()
            .zip(&pts.coords)
            .map(|(a, x)| json!({"address": a.to_string(), "coords": x.as_slice()}))
            .collect::<Vec<_>>())),
        _ => pts.to_csv(),
    };
    emit(&args.output, &text)
}

fn network_text(net: &HanoiNetwork, format: Format, name: &str) -> String {
    match format {
        Format::Dot => net.graph.to_dot(name),
        Format::Json => pretty(&json!({
            "disks": net.disks,
            "graph": graph_json(&net.graph),
        })),
        _ => net.graph.to_csv(),
    }
}

fn net_hn(args: &RangeArgs, hn4: bool) -> Result<(), Failure> {
    let format = format_or(
        &args.output,
        Format::Csv,
        &[Format::Csv, Format::Dot, Format::Json],
    )?;
    let (net, name) = if hn4 {
        (build_hn4(args.nodes)?, "hn4")
    } else {
        (build_hn3(args.nodes)?, "hn3")
    };
    emit(&args.output, &network_text(&net, format, name))
}

fn net_automaton(args: &DiskArgs) -> Result<(), Failure> {
    let format = format_or(
        &args.output,
        Format::Csv,
        &[Format::Csv, Format::Dot, Format::Json],
    )?;
    let h = build_automaton_network(args.n)?;
    let text = match (format, args.coords) {
        (Format::Csv, true) => h.coordinates_csv(),
        (Format::Dot, _) => h.graph.to_dot(&format!("H{}", args.n)),
        (Format::Json, _) => pretty(&json!({
            "n": h.n,
            "edge_length": h.edge_length,
            "coords": h.coords,
            "graph": graph_json(&h.graph),
        })),
        _ => h.graph.to_csv(),
    };
    emit(&args.output, &text)
}

fn net_minor(args: &DiskArgs) -> Result<(), Failure> {
    let format = format_or(
        &args.output,
        Format::Csv,
        &[Format::Csv, Format::Dot, Format::Json],
    )?;
    let minor = build_minor(args.n)?;
    let text = match (format, args.coords) {
        (Format::Csv, true) => {
            let h = build_automaton_network(args.n)?;
            coordinates_csv(minor.graph.labels(), &minor_coordinates(&minor, &h))
        }
        (Format::Dot, _) => minor.graph.to_dot(&format!("H{}_collapsed", args.n)),
        (Format::Json, _) => pretty(&json!({
            "n": minor.n,
            "disks": minor.disks,
            "blob_sizes": (0..minor.node_count()).map(|v| minor.blob(v).len()).collect::<Vec<_>>(),
            "graph": graph_json(&minor.graph),
        })),
        _ => minor.graph.to_csv(),
    };
    emit(&args.output, &text)
}

fn net_verify(args: &DiskArgs) -> Result<(), Failure> {
    let format = format_or(
        &args.output,
        Format::Text,
        &[Format::Text, Format::Csv, Format::Json],
    )?;
    let iso = verify_isomorphism(args.n)?;
    let minor = check_minor(args.n)?;
    let distortion = distortion_report(args.n)?;
    let text = match format {
        Format::Csv => distortion.to_csv(),
        Format::Json => pretty(&json!({
            "n": args.n,
            "nodes": iso.nodes,
            "constructive": iso.constructive,
            "oracle": iso.oracle,
            "degree_sequences_equal": iso.degree_sequences_equal,
            "minor": minor.is_minor(),
            "deleted_edges": minor.deleted.len(),
            "min_ratio": distortion.min_ratio,
            "max_ratio": distortion.max_ratio,
            "bound": distortion.bound(),
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "level {}: {} nodes", args.n, iso.nodes);
            let _ = writeln!(s, "constructive mapping: {}", iso.constructive);
            let _ = writeln!(s, "backtracking oracle: {}", iso.oracle);
            let _ = writeln!(s, "degree sequences equal: {}", iso.degree_sequences_equal);
            let _ = writeln!(s, "minor of H_{}: {}", args.n, minor.is_minor());
            let _ = writeln!(
                s,
                "distortion: min {:.6e}, max {:.6e}, 2^(1-n) = {:.6e}",
                distortion.min_ratio,
                distortion.max_ratio,
                distortion.bound()
            );
            s
        }
    };
    emit(&args.output, &text)?;
    if !iso.holds() || !minor.is_minor() {
        return Err(Failure::Computation(format!(
            "level {}: correspondence check failed",
            args.n
        )));
    }
    Ok(())
}
