#![no_main]
use chordcolor::counterexamples::instance_c5;
use chordcolor::formula::build_phi;
use chordcolor::solvers::unger::parse_trace_line;
use chordcolor::solvers::VariableOrder;
use chordcolor::subgraphs::{important_subgraphs, Filter, FilterVariant, DEFAULT_MAX_CYCLE};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let g = instance_c5().graph;
    let imp = important_subgraphs(
        &g,
        g.diagram().unwrap(),
        &Filter::new(FilterVariant::ExtendedAbstract),
        DEFAULT_MAX_CYCLE,
    )
    .unwrap();
    let phi = build_phi(&g, &imp.subgraphs).unwrap();
    if let Ok(order) = VariableOrder::parse(&phi, s) {
        assert_eq!(order.len(), phi.var_count());
    }
    for line in s.lines() {
        let _ = parse_trace_line(&phi, line);
    }
});
