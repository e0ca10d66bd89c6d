#![allow(dead_code)]

use nilcommute::Partition;

pub fn p(s: &str) -> Partition {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e:?}"))
}

/// Box floors as listed for each three-part target, floor 1 first.
pub const BOX_FLOORS: &[(&str, &[&[&str]])] = &[
    (
        "8,5,2",
        &[
            &["(8,5,2)", "(8,5,1^2)", "(8,4,2,1)", "(8,4,1^3)"],
            &["(7,4,2^2)", "(7,4,2,1^2)", "(7,3^2,1^2)", "(7,4,1^4)"],
        ],
    ),
    (
        "9,6,3",
        &[
            &["(9,6,3)", "(9,6,[3]^2)", "(9,6,[3]^3)", "(9,5,[4]^2)", "(9,5,[4]^3)", "(9,5,[4]^4)"],
            &["(8,5,[5]^2)", "(8,[7]^2,[3]^2)", "(8,[7]^2,[3]^3)", "(8,5,[5]^3)", "(8,5,[5]^4)", "(8,5,[5]^5)"],
        ],
    ),
    (
        "9,6,2",
        &[
            &["(9,6,2)", "(9,6,1,1)", "(9,4,2^2)", "(9,4,2,1^2)", "(9,3^2,1^2)", "(9,4,1^4)"],
            &["(8,4,3,2)", "(8,4,3,1^2)", "(8,4,2^2,1)", "(8,4,2,1^3)", "(8,3^2,1^3)", "(8,4,1^5)"],
        ],
    ),
    (
        "9,5,2",
        &[
            &["(9,5,2)", "(9,5,1,1)", "(9,4,2,1)", "(9,4,1^3)"],
            &["(7,4,3,2)", "(7,4,3,1^2)", "(7,4,2^2,1)", "(7,4,2,1^3)"],
            &["(6,[7]^2,[3]^2)", "(7,3^2,1^3)", "(6,[7]^2,[3]^3)", "(7,4,1^5)"],
        ],
    ),
];

/// Second floor (largest part 10) of the box for (11,8,5,2).
pub const BOX_11_8_5_2_FLOOR2: &[&str] = &[
    "(10,7,4,3,2)",
    "(10,7,4,3,1^2)",
    "(10,7,4,2^2,1)",
    "(10,7,4,2,1^3)",
    "(10,6,4,3,2,1)",
    "(10,7,3^2,1^3)",
    "(10,6,4,3,1^3)",
    "(10,7,4,1^5)",
];

fn grid(f: impl Fn(usize, usize) -> String, rows: usize, cols: usize) -> Vec<Vec<String>> {
    (1..=rows).map(|k| (1..=cols).map(|l| f(k, l)).collect()).collect()
}

fn literal<const C: usize>(rows: &[[&str; C]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn printed_27_3(k: usize, l: usize) -> String {
    match (k, l) {
        (1..=6, _) => format!("([27]^{k},[3]^{l})"),
        (7, _) => format!("(5,[25]^{})", l + 6),
        (8..=9, 1..=2) => format!("([27]^{k},[3]^{})", l + 1),
        (10, 1..=2) => format!("([7]^2,[22]^{},1)", l + 7),
        (11, 1) => "([27]^9,[3]^3)".into(),
        (11, 2) => "([7]^2,[22]^10,1)".into(),
        (_, 3) => format!("(5,[25]^{})", k + 2),
        (12..=23, 2) => format!("([7]^2,[23]^{k})"),
        (12..=14, 1) => format!("([27]^{},[3]^3)", k - 2),
        (15..=23, 1) => format!("([9]^3,[21]^{})", k - 2),
        _ => unreachable!(),
    }
}

fn printed_18_3(k: usize, l: usize) -> String {
    match (k, l) {
        (1..=4, _) => format!("([18]^{k},[3]^{l})"),
        (5, _) => format!("(5,[16]^{})", 4 + l),
        (6, 1..=2) => format!("([18]^5,[3]^{})", l + 1),
        (7, 1) => "([16]^5,[5]^3)".into(),
        (7, 2) => "([10]^3,[11]^6)".into(),
        (_, 3) => format!("(5,[16]^{})", k + 2),
        (8..=14, 2) => format!("([7]^2,[14]^{k})"),
        (8..=9, 1) => format!("([18]^{},[3]^3)", k - 2),
        (10..=14, 1) => format!("([9]^3,[12]^{})", k - 2),
        _ => unreachable!(),
    }
}

/// The tables as printed, one entry string per cell, rows k and columns l.
pub fn printed_tables() -> Vec<(&'static str, Vec<Vec<String>>)> {
    let t12_3 = literal(&[
        ["(12,3)", "(12,[3]^2)", "(12,[3]^3)"],
        ["([12]^2,3)", "([12]^2,[3]^2)", "([12]^2,[3]^3)"],
        ["(5,[10]^3)", "(5,[10]^4)", "(5,[10]^5)"],
        ["([12]^3,[3]^2)", "([12]^3,[3]^3)", "(5,[10]^6)"],
        ["(4,[10]^4,1)", "([7]^2,[8]^5)", "(5,[10]^7)"],
        ["([12]^4,[3]^3)", "([7]^2,[8]^6)", "(5,[10]^8)"],
        ["([9]^3,[6]^5)", "([7]^2,[8]^7)", "(5,[10]^9)"],
        ["([9]^3,[6]^6)", "([7]^2,[8]^8)", "(5,[10]^10)"],
    ]);
    let t16_5 = literal(&[
        ["(16,5)", "(16,[5]^2)", "(16,[5]^3)", "(16,[5]^4)", "(16,[5]^5)"],
        ["([16]^2,5)", "([16]^2,[5]^2)", "([16]^2,[5]^3)", "([16]^2,[5]^4)", "([16]^2,[5]^5)"],
        ["(7,[14]^3)", "(7,[14]^4)", "(7,[14]^5)", "(7,[14]^6)", "(7,[14]^7)"],
        ["([16]^3,[5]^2)", "([16]^3,[5]^3)", "([16]^3,[5]^4)", "([16]^3,[5]^5)", "(7,[14]^8)"],
        ["([13]^3,[8]^3)", "([9]^2,[12]^5)", "([9]^2,[12]^6)", "([9]^2,[12]^7)", "(7,[14]^9)"],
        ["([16]^4,[5]^3)", "([16]^4,[5]^4)", "([16]^4,[5]^5)", "([9]^2,[12]^8)", "(7,[14]^10)"],
        ["([11]^3,[10]^5)", "([11]^3,[10]^6)", "([11]^3,[10]^7)", "([9]^2,[12]^9)", "(7,[14]^11)"],
        ["([16]^5,[5]^4)", "([16]^5,[5]^5)", "([11]^3,[10]^8)", "([9]^2,[12]^10)", "(7,[14]^12)"],
        ["([13]^4,[8]^6)", "([13]^4,[8]^7)", "([11]^3,[10]^9)", "([9]^2,[12]^11)", "(7,[14]^13)"],
        ["([15]^5,[6]^6)", "([13]^4,[8]^8)", "([11]^3,[10]^10)", "([9]^2,[12]^12)", "(7,[14]^14)"],
    ]);
    let t10_2_transposed = [
        ["(10,2)", "(5,5,2)", "(4,3,3,2)", "(4,2^4)", "(3,3,2,2,1,1)", "(3,3,2,1^4)", "(3,3,1^6)"],
        ["(10,1,1)", "(5,5,1,1)", "(4,3,3,1,1)", "(4,2^3,1,1)", "(4,2^2,1^4)", "(4,2,1^6)", "(4,1^8)"],
    ];
    let t10_6 = |k: usize, l: usize| match (k, l) {
        (1, _) => format!("(10,[6]^{l})"),
        (2, _) => format!("(8,[8]^{})", l + 1),
        (3, 6) => "(8,[8]^8)".into(),
        _ => format!("([10]^2,[6]^{})", l + 1),
    };
    vec![
        ("27,3", grid(printed_27_3, 23, 3)),
        ("12,3", t12_3),
        ("16,5", t16_5),
        ("18,3", grid(printed_18_3, 14, 3)),
        (
            "10,7",
            grid(|k, l| if k == 1 { format!("(10,[7]^{l})") } else { format!("(9,[8]^{})", l + 1) }, 2, 7),
        ),
        ("10,6", grid(t10_6, 3, 6)),
        ("10,2", grid(|k, l| t10_2_transposed[l - 1][k - 1].to_string(), 7, 2)),
    ]
}

/// Printed entries that fail the cell invariants, with the entry that replaces them.
pub const CORRECTIONS: &[(&str, usize, usize, &str)] = &[
    ("27,3", 8, 1, "([27]^7,[3]^2)"),
    ("27,3", 8, 2, "([27]^7,[3]^3)"),
    ("27,3", 9, 1, "([27]^8,[3]^2)"),
    ("27,3", 9, 2, "([27]^8,[3]^3)"),
    ("16,5", 7, 1, "([11]^3,[9]^4,1)"),
];

pub fn corrected_tables() -> Vec<(&'static str, Vec<Vec<String>>)> {
    let mut tables = printed_tables();
    for (q, grid) in tables.iter_mut() {
        for &(cq, k, l, entry) in CORRECTIONS {
            if cq == *q {
                grid[k - 1][l - 1] = entry.to_string();
            }
        }
    }
    tables
}
