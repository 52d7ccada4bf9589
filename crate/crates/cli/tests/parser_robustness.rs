//! The parsers must reject garbage with errors, never panic.

use proptest::prelude::*;
use tricover::picard::BlowupSurface;
use tricover_cli::expr::parse_class_expr;
use tricover_cli::specfile::parse_spec;

proptest! {
    #[test]
    fn spec_parser_never_panics(text in "\\PC{0,300}") {
        let _ = parse_spec(&text);
    }

    #[test]
    fn spec_parser_never_panics_with_header(body in "[a-zA-Z0-9 =+_\\[\\]();,:.#\n-]{0,400}") {
        let text = format!("tricover-spec v1\n{body}");
        let _ = parse_spec(&text);
    }

    #[test]
    fn expr_parser_never_panics(text in "[a-zA-Z0-9 +*();,_-]{0,80}") {
        let surface = BlowupSurface::general(4);
        let _ = parse_class_expr(&text, &surface, None);
    }
}

#[test]
fn structured_garbage_is_rejected() {
    let surface = BlowupSurface::general(3);
    for bad in [
        "((",
        "(3;",
        "(;1)",
        "1 + + 2",
        "*f1",
        "- -",
        "h0",
        "f1 2",
        "e",
        "(3; 1,1,1,1)",
    ] {
        assert!(parse_class_expr(bad, &surface, None).is_err(), "{bad}");
    }
}
