use alphadpp::config::{format_blocks, parse_blocks, Alpha, Grid, LengthList};
use proptest::prelude::*;

fn block_text() -> impl Strategy<Value = (String, String)> {
    // (as typed, canonical)
    (0u32..400, 1u32..400, 0usize..3, any::<bool>()).prop_map(|(a, w, pad, plus_zero)| {
        let (a, w) = (a as f64 / 8.0, w as f64 / 8.0);
        let typed_a = if plus_zero {
            format!("{a:.4}")
        } else {
            format!("{a}")
        };
        let space = " ".repeat(pad);
        (format!("{space}{typed_a}:{w}{space}"), format!("{a}:{w}"))
    })
}

proptest! {
    #[test]
    fn block_strings_round_trip_to_canonical_form(pairs in prop::collection::vec(block_text(), 1..5)) {
        let typed: Vec<String> = pairs.iter().map(|p| p.0.clone()).collect();
        let canonical: Vec<String> = pairs.iter().map(|p| p.1.clone()).collect();
        let canonical = canonical.join(",");
        let parsed = parse_blocks(&typed.join(",")).unwrap();
        prop_assert_eq!(format_blocks(&parsed), canonical.clone());
        // Canonical forms are fixed points.
        prop_assert_eq!(format_blocks(&parse_blocks(&canonical).unwrap()), canonical);
    }

    #[test]
    fn alpha_display_parses_back(m in 1u64..50) {
        let a: Alpha = format!("-1/{m}").parse().unwrap();
        let back: Alpha = a.to_string().parse().unwrap();
        prop_assert_eq!(a.0, back.0);
        prop_assert_eq!(a.m().unwrap(), m);
    }

    #[test]
    fn grids_round_trip(min in -100.0f64..0.0, span in 0.1f64..100.0, count in 2usize..1000) {
        let g = Grid::new(min, min + span, count).unwrap();
        let back: Grid = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
        let p = g.points();
        prop_assert_eq!(p.len(), count);
        prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn length_lists_round_trip(min in 0.01f64..10.0, ratio in 1.5f64..100.0, count in 2usize..200, log in any::<bool>()) {
        let text = format!("{}:{}:{}{}", min, min * ratio, if log { "log" } else { "" }, count);
        let l: LengthList = text.parse().unwrap();
        prop_assert_eq!(l.to_string(), text);
        prop_assert_eq!(l.values().len(), count);
    }
}
