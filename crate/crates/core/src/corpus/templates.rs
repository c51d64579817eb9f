// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::Category;
use crate::risk::RiskLevel;

const ADJECTIVES: &[&str] = &[
    "Amber", "Brisk", "Cobalt", "Daring", "Ember", "Frost", "Granite", "Harbor", "Ivory", "Juniper",
    "Kestrel", "Lumen", "Maple", "Nimbus", "Onyx", "Pioneer",
];
const NOUNS: &[&str] = &[
    "Vault", "Ledger", "Registry", "Pool", "Fund", "Treasury", "Escrow", "Depot", "Archive",
    "Relay", "Keeper", "Bridge",
];
const GAME_NOUNS: &[&str] = &["Lottery", "Raffle", "Jackpot", "Casino", "Lotto", "BetHouse"];
const WINNER_VARS: &[&str] = &["winner", "lastWinner", "prizeWinner", "currentWinner", "jackpotWinner"];
const ENTROPY_VARS: &[&str] = &["seed", "entropy", "mix", "roll", "pick", "draw", "noise", "digest"];
const FUNCTION_NAMES: &[&str] = &[
    "claim", "play", "spin", "settle", "execute", "run", "trigger", "collect", "redeem", "process",
];
const TIME_VARS: &[&str] = &["lastAction", "lastClaim", "lastPing", "previousCall", "lastTouch"];
const DEADLINE_VARS: &[&str] = &["deadline", "unlockTime", "releaseAt", "maturity"];
const COUNTER_VARS: &[&str] = &["count", "tally", "visits", "nonce", "total"];
const EVENT_NAMES: &[&str] = &["Logged", "Pinged", "Visited", "Recorded", "Touched"];
const HELPER_NAMES: &[&str] = &["scale", "offset", "combine", "adjust", "blend", "shift"];
const DURATIONS: &[&str] = &["15 minutes", "30 minutes", "1 hours", "6 hours", "1 days", "1 weeks"];

/// Source text and declared path risks, in path-id order.
pub(crate) struct Rendered {
    pub source: String,
    pub expected_path_risks: Vec<RiskLevel>,
}

struct Names<'r, R: Rng> {
    rng: &'r mut R,
    used: BTreeSet<String>,
}

impl<R: Rng> Names<'_, R> {
    fn pick(&mut self, pool: &[&str]) -> String {
        let base = *pool.choose(self.rng).expect("non-empty pool");
        let mut name = base.to_string();
        let mut k = 2;
        while !self.used.insert(name.clone()) {
            name = format!("{base}{k}");
            k += 1;
        }
        name
    }

    fn contract(&mut self, nouns: &[&str]) -> String {
        let adj = *ADJECTIVES.choose(self.rng).expect("non-empty pool");
        let noun = *nouns.choose(self.rng).expect("non-empty pool");
        format!("{adj}{noun}")
    }
}

/// Pure helpers and a private counter: no entropy sources, so no paths.
fn distractors<R: Rng>(names: &mut Names<'_, R>) -> String {
    let mut out = String::new();
    for _ in 0..names.rng.gen_range(0..=2) {
        let name = names.pick(HELPER_NAMES);
        let (k, m) = (names.rng.gen_range(2..50), names.rng.gen_range(1..1000));
        out.push_str(&format!(
            "\n    function {name}(uint256 a) public pure returns (uint256) {{\n        return a * {k} + {m};\n    }}\n"
        ));
    }
    if names.rng.gen_bool(0.5) {
        let var = names.pick(&["audits", "touches", "marks"]);
        let f = names.pick(&["bump", "note", "mark"]);
        out.push_str(&format!(
            "\n    uint256 private {var};\n\n    function {f}(uint256 a) public {{\n        {var} = {var} + a;\n    }}\n"
        ));
    }
    out
}

pub(crate) fn render<R: Rng>(category: Category, rng: &mut R) -> Rendered {
    let mut names = Names {
        rng,
        used: BTreeSet::new(),
    };
    use RiskLevel::{High, Safe};
    let (body, contract, risks) = match category {
        Category::VulnModulo => {
            let f = names.pick(FUNCTION_NAMES);
            let n = names.rng.gen_range(2..=10);
            let amount = names.rng.gen_range(1..=100) * 1000;
            (
                format!(
                    "    function {f}() public payable {{\n        if (block.timestamp % {n} == 0) {{\n            payable(msg.sender).transfer({amount});\n        }}\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![High],
            )
        }
        Category::VulnKeccakRng => {
            let f = names.pick(FUNCTION_NAMES);
            let n = names.rng.gen_range(2..=100);
            (
                format!(
                    "    function {f}() public view returns (uint256) {{\n        return uint256(keccak256(abi.encodePacked(block.timestamp, msg.sender))) % {n};\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![High],
            )
        }
        Category::VulnLottery => {
            let winner = names.pick(WINNER_VARS);
            let r = names.pick(ENTROPY_VARS);
            let f = names.pick(FUNCTION_NAMES);
            let n = names.rng.gen_range(2..=20);
            (
                format!(
                    "    address public {winner};\n\n    function {f}() public payable {{\n        uint256 {r} = uint256(keccak256(abi.encodePacked(block.timestamp, block.difficulty))) % {n};\n        if ({r} == 0) {{\n            {winner} = msg.sender;\n            payable(msg.sender).transfer(address(this).balance);\n        }}\n    }}\n"
                ),
                names.contract(GAME_NOUNS),
                vec![High, High],
            )
        }
        Category::VulnBlockhash => {
            let h = names.pick(ENTROPY_VARS);
            let f = names.pick(FUNCTION_NAMES);
            let n = names.rng.gen_range(2..=10);
            let amount = names.rng.gen_range(1..=100) * 1000;
            (
                format!(
                    "    function {f}(uint256 guess) public payable {{\n        uint256 {h} = uint256(blockhash(block.number - 1)) % {n};\n        if (guess == {h}) {{\n            payable(msg.sender).transfer({amount});\n        }}\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![High],
            )
        }
        Category::SafeTimeLock => {
            let deadline = names.pick(DEADLINE_VARS);
            let f = names.pick(&["withdraw", "release", "unlock"]);
            let delay = *DURATIONS.choose(names.rng).expect("non-empty pool");
            (
                format!(
                    "    address owner;\n    uint256 {deadline};\n\n    constructor(uint256 t) {{\n        owner = msg.sender;\n        {deadline} = t;\n    }}\n\n    function {f}() public {{\n        require(block.timestamp >= {deadline} + {delay});\n        payable(owner).transfer(address(this).balance);\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![Safe],
            )
        }
        Category::SafeLogging => {
            let counter = names.pick(COUNTER_VARS);
            let event = names.pick(EVENT_NAMES);
            let f = names.pick(FUNCTION_NAMES);
            (
                format!(
                    "    uint256 {counter};\n    event {event}(address who, uint256 when);\n\n    function {f}() public {{\n        {counter} += 1;\n        emit {event}(msg.sender, block.timestamp);\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![Safe],
            )
        }
        Category::SafeCooldown => {
            let last = names.pick(TIME_VARS);
            let counter = names.pick(COUNTER_VARS);
            let f = names.pick(FUNCTION_NAMES);
            let delay = *DURATIONS.choose(names.rng).expect("non-empty pool");
            (
                format!(
                    "    uint256 {last};\n    uint256 {counter};\n\n    function {f}() public {{\n        require(block.timestamp > {last} + {delay});\n        {last} = block.timestamp;\n        {counter} += 1;\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![Safe; 4],
            )
        }
        Category::NeutralArithmetic => {
            let total = names.pick(COUNTER_VARS);
            let f = names.pick(FUNCTION_NAMES);
            let k = names.rng.gen_range(2..=9);
            (
                format!(
                    "    uint256 {total};\n\n    function {f}(uint256 a, uint256 b) public returns (uint256) {{\n        uint256 c = a * {k} + b;\n        {total} = {total} + c;\n        return c;\n    }}\n"
                ),
                names.contract(NOUNS),
                vec![],
            )
        }
    };
    let extra = distractors(&mut names);
    Rendered {
        source: format!("pragma solidity ^0.8.0;\n\ncontract {contract} {{\n{body}{extra}}}\n"),
        expected_path_risks: risks,
    }
}
