use chordcolor::counterexamples::{
    instance_c5, instance_ea, load_thesis_instance, thesis_from_file, verify, C5_JUMPS, C5_ORDER,
};
use chordcolor::formula::build_phi;
use chordcolor::generator::InstanceFile;
use chordcolor::solvers::coloring::brute_force_3color;
use chordcolor::solvers::unger::{parse_trace_line, render_trace};
use chordcolor::solvers::{
    solve_unger, Budget, ConflictChoice, JumpChoice, TraceAction, UngerConfig, VariableOrder,
};
use chordcolor::subgraphs::{important_subgraphs, Filter, FilterVariant};
use chordcolor::Error;

#[test]
fn ea_facts_all_hold() {
    let inst = instance_ea();
    assert_eq!(inst.facts.len(), 14);
    for f in &inst.facts {
        assert!(f.holds, "{}", f.name);
    }
    assert_eq!(inst.graph.edge_count(), 14);
}

#[test]
fn ea_level_partition() {
    let inst = instance_ea();
    let lv = inst.graph.diagram().unwrap().levels();
    let names = |l| -> Vec<&str> {
        lv.members(l)
            .into_iter()
            .map(|v| inst.graph.label(v))
            .collect()
    };
    assert_eq!(names(1), ["v1", "v3"]);
    assert_eq!(names(2), ["v2", "v4", "v5"]);
    assert_eq!(names(3), ["v6", "v7", "v8"]);
}

#[test]
fn ea_is_refuted_under_both_variants_of_the_oracle() {
    let inst = instance_ea();
    let r = verify(&inst, FilterVariant::ExtendedAbstract).unwrap();
    assert!(r.overall);
    assert_eq!(r.rows_present, Some(true));
    // the thesis filter has no clause expectations for this instance
    let t = verify(&inst, FilterVariant::Thesis).unwrap();
    assert_eq!(t.clause_set_match, None);
    assert_eq!(t.colorable_by_oracle, Some(false));
}

fn c5_phi() -> chordcolor::Formula {
    let inst = instance_c5();
    let g = &inst.graph;
    let imp = important_subgraphs(
        g,
        g.diagram().unwrap(),
        &Filter::new(FilterVariant::ExtendedAbstract),
        12,
    )
    .unwrap();
    build_phi(g, &imp.subgraphs).unwrap()
}

fn c5_run(conflict: ConflictChoice, jump: JumpChoice) -> chordcolor::solvers::UngerRun {
    let phi = c5_phi();
    let order = VariableOrder::parse(&phi, C5_ORDER).unwrap();
    solve_unger(
        &phi,
        &order,
        Budget::unlimited(),
        &UngerConfig {
            conflict,
            jump,
            trace: true,
        },
    )
    .unwrap()
}

#[test]
fn c5_first_and_last_events() {
    let phi = c5_phi();
    let script = C5_JUMPS
        .lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|t| phi.var_by_name(t).unwrap())
        .collect();
    let run = c5_run(ConflictChoice::Last, JumpChoice::Scripted(script));
    assert_eq!(run.trace.len(), 10);
    assert_eq!(run.stats.jumps, 3);
    assert_eq!(run.stats.leaves, 10);
    let text = render_trace(&phi, &run.trace);
    let lines: Vec<&str> = text.lines().collect();
    let first = parse_trace_line(&phi, lines[0]).unwrap();
    assert_eq!(
        first,
        parse_trace_line(&phi, "(1) | ¬h(v1,v5) | h(v1,v5)").unwrap()
    );
    let last = parse_trace_line(&phi, lines[9]).unwrap();
    let want = parse_trace_line(
        &phi,
        "(10) | (v3,v5) ∨ h(v2,v5) ∨ h(v2,v3) ∨ h(v2,v4) | n.a.",
    )
    .unwrap();
    assert_eq!(last, want);
    assert_eq!(run.trace[9].action, TraceAction::ReportUnsat);
    assert!(brute_force_3color(&instance_c5().graph).unwrap().is_some());
}

#[test]
fn c5_failure_depends_on_jump_choices() {
    // with the default choices the same order happens to reach a model
    let run = c5_run(ConflictChoice::First, JumpChoice::Deepest);
    let phi = c5_phi();
    match run.stats.outcome {
        chordcolor::solvers::Outcome::Sat(a) => {
            assert_eq!(phi.eval(&a), chordcolor::formula::Eval::Satisfied)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn c5_script_must_name_legal_targets() {
    let phi = c5_phi();
    // (v2,v4) is unassigned when the first jump happens
    let bad = vec![phi.var_by_name("(v2,v4)").unwrap()];
    let order = VariableOrder::parse(&phi, C5_ORDER).unwrap();
    let r = solve_unger(
        &phi,
        &order,
        Budget::unlimited(),
        &UngerConfig {
            conflict: ConflictChoice::Last,
            jump: JumpChoice::Scripted(bad),
            trace: true,
        },
    );
    assert!(matches!(r, Err(Error::ScriptViolation(_))));
}

#[test]
fn thesis_loader_names_the_violated_fact() {
    // a 10-vertex graph without the v2v7 edge
    let mut text = String::from("10 0 0\n");
    let ends: Vec<String> = (1..=10)
        .flat_map(|i| [format!("v{i}"), format!("v{i}")])
        .collect();
    text.push_str(&ends.join(" "));
    text.push_str("\nnone\n");
    let file = InstanceFile::parse(&text).unwrap();
    match thesis_from_file(file) {
        Err(Error::FactViolated(msg)) => assert!(msg.contains("v2v7"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.txt");
    assert!(matches!(load_thesis_instance(&missing), Err(Error::Io(_))));
}
