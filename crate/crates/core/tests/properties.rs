mod support;

const CASES: u32 = 256;

fn ok(r: support::Outcome) {
    if let Err(e) = r {
        panic!("{e}");
    }
}

#[test]
fn series_ring_axioms() {
    ok(support::ring_axioms(CASES));
}

#[test]
fn dissection_components_reassemble() {
    ok(support::dissection_completeness(CASES));
}

#[test]
fn extraction_is_linear() {
    ok(support::extract_linearity(CASES));
}

#[test]
fn reduction_is_a_ring_map() {
    ok(support::reduce_mod_homomorphism(CASES));
}

#[test]
fn printed_expressions_parse_back() {
    ok(support::parser_round_trip(CASES));
}

#[test]
fn distinct_and_regular_counts_agree() {
    ok(support::glaisher(128));
}

#[test]
fn legendre_symbol_is_multiplicative() {
    ok(support::legendre_multiplicativity(CASES));
}
