//! Nine small T2-quasigroups found by a finite model finder, shipped as text
//! tables under `fixtures/`.

use crate::table::CayleyTable;

/// A named reference table.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    /// Operation symbol the table is usually printed with.
    pub symbol: &'static str,
    pub text: &'static str,
}

impl Fixture {
    pub fn table(&self) -> CayleyTable {
        self.text
            .parse()
            .unwrap_or_else(|e| panic!("fixture {} is malformed: {e}", self.name))
    }
}

pub const STAR3: Fixture = Fixture {
    name: "star3",
    symbol: "∗",
    text: include_str!("../fixtures/star3.tbl"),
};
pub const CIRC5: Fixture = Fixture {
    name: "circ5",
    symbol: "∘",
    text: include_str!("../fixtures/circ5.tbl"),
};
pub const STAR7: Fixture = Fixture {
    name: "star7",
    symbol: "⋆",
    text: include_str!("../fixtures/star7.tbl"),
};
pub const DIAMOND8: Fixture = Fixture {
    name: "diamond8",
    symbol: "⋄",
    text: include_str!("../fixtures/diamond8.tbl"),
};
pub const BULLET11: Fixture = Fixture {
    name: "bullet11",
    symbol: "•",
    text: include_str!("../fixtures/bullet11.tbl"),
};
pub const BOXTIMES4: Fixture = Fixture {
    name: "boxtimes4",
    symbol: "⊠",
    text: include_str!("../fixtures/boxtimes4.tbl"),
};
pub const BOXDOT7: Fixture = Fixture {
    name: "boxdot7",
    symbol: "⊡",
    text: include_str!("../fixtures/boxdot7.tbl"),
};
pub const BOXPLUS9: Fixture = Fixture {
    name: "boxplus9",
    symbol: "⊞",
    text: include_str!("../fixtures/boxplus9.tbl"),
};
pub const BOXMINUS11: Fixture = Fixture {
    name: "boxminus11",
    symbol: "⊟",
    text: include_str!("../fixtures/boxminus11.tbl"),
};

pub const ALL: [Fixture; 9] = [
    STAR3, CIRC5, STAR7, DIAMOND8, BULLET11, BOXTIMES4, BOXDOT7, BOXPLUS9, BOXMINUS11,
];

pub fn by_name(name: &str) -> Option<Fixture> {
    ALL.iter().copied().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_parse_with_expected_orders() {
        let orders: Vec<_> = ALL.iter().map(|f| f.table().order()).collect();
        assert_eq!(orders, [3, 5, 7, 8, 11, 4, 7, 9, 11]);
    }

    #[test]
    fn text_is_canonical() {
        for f in ALL {
            assert_eq!(f.table().to_text(), f.text, "{}", f.name);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("diamond8").unwrap().table().order(), 8);
        assert!(by_name("nope").is_none());
    }
}
