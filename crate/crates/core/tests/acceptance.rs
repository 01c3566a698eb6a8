//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fifteen_core::bench::{load_dataset, run_benchmark_with_cache, summarize, Algorithm, Dataset, ReportRow, RowStatus, RunConfig};
use fifteen_core::heuristics::{breakdown, hh_report, linear_conflict, manhattan, walking_distance, walking_distance_parts, Heuristic, HeuristicContext, WdCache, WdPattern, WdTable};
use fifteen_core::puzzle::{parity_rule, replay, GoalConvention, Move, PuzzleState};
use fifteen_core::search::{ida_star, Budget};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// criterion 1
const WD_ENTRIES: usize = 24_964;
const WD_MAX: u8 = 35;
const WD_BUILD_LIMIT: Duration = Duration::from_secs(5);
// criterion 3
const SUM_MD: u64 = 3705;
const SUM_WD: u64 = 3957;
const SUM_LC: u64 = 188;
const SUM_OPTIMAL: u64 = 5307;
const SUM_HH: u32 = 5380;
// criterion 4
const HH_ANCHORS: [(u32, u32); 3] = [(1, 57), (16, 36), (34, 62)];
const MEAN_HH: f64 = 54.0;
// criterion 5
const IDA_SMALLEST: usize = 10;
const IDA_LIMIT: Duration = Duration::from_secs(300);
const ORACLE_STATES: usize = 1000;
const ORACLE_DEPTH: u32 = 14;
// criterion 6
const KORF_BUDGET: u64 = 2_000_000;
const KORF_WITHIN: i64 = 6;
const KORF_WITHIN_SHARE: f64 = 0.80;
const KORF_MEAN_GENERATED: f64 = 5e5;
// criterion 7
const HARD_LEN_RANGE: (u32, u32) = (80, 92);
const HARD_REFERENCE_MEAN_GENERATED: f64 = 260_572.0;
// criterion 8
const UA_MIN_FAILURES: usize = 5;
// criterion 9
const ABC_OPTIMAL_MEAN: f64 = 48.48;
const ABC_TOLERANCE: f64 = 4.0;
// criterion 10
const PROPERTY_STATES: usize = 100_000;

const KORF_REFERENCE: &str = include_str!("data/korf100_reference.tsv");

struct Outcome {
    failed: Vec<String>,
}

impl Outcome {
    fn report(&mut self, id: &str, pass: bool, detail: String) {
        println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(id.to_string());
        }
    }
}

struct ReferenceRow {
    id: u32,
    optimal: u32,
    wd: u32,
    md: u32,
    lc: u32,
    hh: u32,
}

fn korf_reference() -> Vec<ReferenceRow> {
    KORF_REFERENCE
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<u32> = l.split('\t').map(|x| x.parse().unwrap()).collect();
            ReferenceRow { id: f[0], optimal: f[1], wd: f[6], md: f[7], lc: f[8], hh: f[9] }
        })
        .collect()
}

fn top_left_ctx(cache: &WdCache) -> HeuristicContext {
    HeuristicContext::with_cache(GoalConvention::BlankTopLeft.goal_state(), cache).unwrap()
}

fn wd_tables(out: &mut Outcome) {
    let mut details = Vec::new();
    let mut pass = true;
    for conv in [GoalConvention::BlankTopLeft, GoalConvention::BlankBottomRight] {
        let blank = conv.goal_state().blank_pos();
        let clock = Instant::now();
        let table = WdTable::build(WdPattern::root(blank / 4)).unwrap();
        let took = clock.elapsed();
        pass &= table.len() == WD_ENTRIES && table.max_distance() == WD_MAX && took < WD_BUILD_LIMIT;
        details.push(format!("{conv}: {} entries, max {}, {:.0?}", table.len(), table.max_distance(), took));
    }
    out.report("1 wd-table", pass, details.join("; "));
}

fn worked_example(out: &mut Outcome) {
    let goal = GoalConvention::BlankBottomRight.goal_state();
    let ctx = HeuristicContext::new(goal).unwrap();
    let start: PuzzleState = "1 4 2 3 13 6 7 8 5 10 11 0 9 14 15 12".parse().unwrap();
    let md = manhattan(&start, &ctx);
    let lc = linear_conflict(&start, &ctx);
    let wd = walking_distance_parts(&start, &ctx).unwrap();
    let pass = (md, lc, md + lc, wd.rows, wd.cols, wd.total()) == (9, 4, 13, 5, 6, 11);
    out.report(
        "2 worked-example",
        pass,
        format!("MD {md}, LC {lc} (sum {}), WD {} = {} + {}", md + lc, wd.total(), wd.rows, wd.cols),
    );
}

fn korf_heuristics(out: &mut Outcome, ds: &Dataset, cache: &WdCache) {
    let ctx = top_left_ctx(cache);
    let reference = korf_reference();
    let (mut md, mut wd, mut lc, mut x3, mut opt) = (0u64, 0u64, 0u64, 0u32, 0u64);
    let mut hh_rows = Vec::new();
    let mut row_mismatch = Vec::new();
    for (inst, r) in ds.instances.iter().zip(&reference) {
        assert_eq!(inst.id, r.id);
        let b = breakdown(&inst.start, &ctx).unwrap();
        md += b.md as u64;
        wd += b.wd.total() as u64;
        lc += b.lc as u64;
        x3 += b.hh_x3.value_x3();
        opt += inst.optimal_len.unwrap() as u64;
        hh_rows.push((inst.id, b.hh()));
        if (b.md, b.wd.total(), inst.optimal_len) != (r.md, r.wd, Some(r.optimal)) {
            row_mismatch.push(inst.id);
        }
    }
    let exact = fifteen_core::ThirdsValue(x3);
    let parts = [
        ("MD", md == SUM_MD, format!("{md}/{SUM_MD}")),
        ("WD", wd == SUM_WD, format!("{wd}/{SUM_WD}")),
        ("optimal", opt == SUM_OPTIMAL, format!("{opt}/{SUM_OPTIMAL}")),
        ("LC", lc == SUM_LC, format!("{lc}/{SUM_LC}")),
        ("hh", exact.rounded() == SUM_HH && x3 % 3 == 0, format!("{exact}/{SUM_HH}")),
    ];
    let detail: Vec<String> = parts
        .iter()
        .map(|(n, ok, v)| format!("{n} {v} {}", if *ok { "ok" } else { "differs" }))
        .collect();
    out.report(
        "3 korf100-aggregates",
        parts.iter().all(|p| p.1),
        format!("{}; per-row MD/WD/optimal mismatches {:?}", detail.join(", "), row_mismatch),
    );

    let hh_match = hh_rows.iter().zip(&reference).filter(|((_, h), r)| *h == r.hh).count();
    let lc_match = ds
        .instances
        .iter()
        .zip(&reference)
        .filter(|(i, r)| linear_conflict(&i.start, &ctx) == r.lc)
        .count();
    let anchors: Vec<String> = HH_ANCHORS
        .iter()
        .map(|&(id, want)| {
            let got = hh_rows.iter().find(|(i, _)| *i == id).unwrap().1;
            format!("#{id} {got}/{want}")
        })
        .collect();
    let mean = hh_rows.iter().map(|(_, h)| *h as f64).sum::<f64>() / hh_rows.len() as f64;
    out.report(
        "4 hh-column",
        hh_match == reference.len() && mean.round() == MEAN_HH,
        format!(
            "{hh_match}/100 rows match (LC column {lc_match}/100); anchors {}; mean {mean:.2}",
            anchors.join(" ")
        ),
    );
}

fn bfs_depths(goal: &PuzzleState, max_depth: u32) -> HashMap<PuzzleState, u32> {
    let mut depth = HashMap::from([(*goal, 0)]);
    let mut layer = vec![*goal];
    for d in 1..=max_depth {
        let mut next = Vec::new();
        for s in &layer {
            for m in Move::ALL {
                if let Some(c) = s.step(m) {
                    depth.entry(c).or_insert_with(|| {
                        next.push(c);
                        d
                    });
                }
            }
        }
        layer = next;
    }
    depth
}

fn ida_oracle(out: &mut Outcome, ds: &Dataset, cache: &WdCache) {
    let ctx = top_left_ctx(cache);
    let mut order: Vec<_> = ds.instances.iter().collect();
    order.sort_by_key(|i| (i.optimal_len, i.id));
    let mut pass = true;
    let mut details = Vec::new();
    let mut slowest = Duration::ZERO;
    for inst in order.into_iter().take(IDA_SMALLEST) {
        let clock = Instant::now();
        let r = ida_star(&inst.start, &inst.goal(), &ctx, Heuristic::MdLc, &Budget::unlimited()).unwrap();
        let took = clock.elapsed();
        slowest = slowest.max(took);
        let ok = Some(r.length as u32) == inst.optimal_len && took < IDA_LIMIT;
        pass &= ok;
        details.push(format!("#{}={}{}", inst.id, r.length, if ok { "" } else { "!" }));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x1DA);
    let mut oracle_ok = 0;
    for conv in [GoalConvention::BlankTopLeft, GoalConvention::BlankBottomRight] {
        let goal = conv.goal_state();
        let octx = HeuristicContext::with_cache(goal, cache).unwrap();
        let depth = bfs_depths(&goal, ORACLE_DEPTH);
        let mut states: Vec<(&PuzzleState, &u32)> = depth.iter().collect();
        states.sort_by_key(|(s, _)| s.key());
        for (s, &d) in states.choose_multiple(&mut rng, ORACLE_STATES / 2) {
            let r = ida_star(s, &goal, &octx, Heuristic::MdLc, &Budget::unlimited()).unwrap();
            if r.length as u32 == d && replay(s, &r.moves).unwrap() == goal {
                oracle_ok += 1;
            }
        }
    }
    pass &= oracle_ok == ORACLE_STATES;
    out.report(
        "5 ida-oracle",
        pass,
        format!(
            "{} (slowest {slowest:.1?}); BFS oracle {oracle_ok}/{ORACLE_STATES} at depth <= {ORACLE_DEPTH}",
            details.join(" ")
        ),
    );
}

fn run(ds: &Dataset, algorithm: Algorithm, budget: Budget, cache: &WdCache) -> Vec<ReportRow> {
    let cfg = RunConfig { algorithm, budget, ..RunConfig::default() };
    run_benchmark_with_cache(ds, &cfg, cache).unwrap()
}

fn lengths_sound(rows: &[ReportRow]) -> bool {
    rows.iter()
        .filter(|r| r.status == RowStatus::Solved)
        .all(|r| matches!(r.delta, Some(d) if d >= 0 && d % 2 == 0))
}

fn korf_bastar(out: &mut Outcome, rows: &[ReportRow]) {
    let s = summarize(rows);
    let within = rows.iter().filter(|r| r.delta.is_some_and(|d| d <= KORF_WITHIN)).count();
    let share = within as f64 / rows.len() as f64;
    let mean_gen = s.mean_generated.unwrap();
    out.report(
        "6 korf100-bastar",
        s.solved == rows.len() && lengths_sound(rows) && share >= KORF_WITHIN_SHARE && mean_gen < KORF_MEAN_GENERATED,
        format!(
            "solved {}/{}, deltas even and >= 0: {}, within {KORF_WITHIN}: {:.0}%, mean generated {mean_gen:.0}, histogram {:?}",
            s.solved,
            rows.len(),
            lengths_sound(rows),
            share * 100.0,
            s.delta_histogram
        ),
    );
}

fn hard_bastar(out: &mut Outcome, rows: &[ReportRow]) {
    let s = summarize(rows);
    let in_range = rows.iter().filter_map(|r| r.length).all(|l| {
        l >= HARD_LEN_RANGE.0 && l <= HARD_LEN_RANGE.1 && l % 2 == 0
    });
    let mean_gen = s.mean_generated.unwrap();
    let ratio = mean_gen / HARD_REFERENCE_MEAN_GENERATED;
    let failed: Vec<u32> = rows.iter().filter(|r| r.status != RowStatus::Solved).map(|r| r.id).collect();
    out.report(
        "7 hard28-bastar",
        failed.is_empty() && in_range && (0.1..=10.0).contains(&ratio),
        format!(
            "solved {}/{} (unsolved {failed:?}), lengths in [{}, {}] and even: {in_range}, mean length {:.2}, mean generated {mean_gen:.0} ({ratio:.1}x reference)",
            s.solved,
            rows.len(),
            HARD_LEN_RANGE.0,
            HARD_LEN_RANGE.1,
            s.mean_length_solved.unwrap_or(0.0)
        ),
    );
}

fn ua_contrast(out: &mut Outcome, ua: &[ReportRow], ba: &[ReportRow]) {
    let ua_fail: Vec<u32> = ua.iter().filter(|r| r.status == RowStatus::BudgetExceeded).map(|r| r.id).collect();
    let ba_fail = ba.iter().filter(|r| r.status != RowStatus::Solved).count();
    let s = summarize(ua);
    out.report(
        "8 hard28-ua-vs-ba",
        ua_fail.len() >= UA_MIN_FAILURES && ba_fail == 0,
        format!(
            "UA* budget_exceeded on {} {ua_fail:?}, BA* failures {ba_fail}; UA* mean length {:.2} solved / {:.2} all rows",
            ua_fail.len(),
            s.mean_length_solved.unwrap_or(0.0),
            s.mean_length_all.unwrap_or(0.0)
        ),
    );
}

fn abc(out: &mut Outcome, rows: &[ReportRow]) {
    let s = summarize(rows);
    let mean = s.mean_length_solved.unwrap_or(f64::NAN);
    out.report(
        "9 abc25-bastar",
        s.solved == rows.len() && (mean - ABC_OPTIMAL_MEAN).abs() <= ABC_TOLERANCE,
        format!("solved {}/{}, mean length {mean:.2} vs optimal mean {ABC_OPTIMAL_MEAN}", s.solved, rows.len()),
    );
}

fn random_solvable(rng: &mut ChaCha8Rng, conv: GoalConvention) -> PuzzleState {
    let mut tiles: Vec<u8> = (0..16).collect();
    tiles.shuffle(rng);
    let goal = conv.goal_state();
    if !parity_rule(&tiles, goal.tiles(), 4) {
        let a = tiles.iter().position(|&t| t != 0).unwrap();
        let b = tiles.iter().rposition(|&t| t != 0).unwrap();
        tiles.swap(a, b);
    }
    PuzzleState::from_tiles(tiles.try_into().unwrap()).unwrap()
}

fn eight_puzzle_matches_rule() -> (usize, bool) {
    let goal: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 0];
    let mut seen = HashMap::from([(goal, ())]);
    let mut queue = VecDeque::from([goal]);
    while let Some(s) = queue.pop_front() {
        let b = s.iter().position(|&t| t == 0).unwrap();
        let (r, c) = (b / 3, b % 3);
        let nbrs = [
            (r > 0).then(|| b - 3),
            (r < 2).then(|| b + 3),
            (c > 0).then(|| b - 1),
            (c < 2).then(|| b + 1),
        ];
        for n in nbrs.into_iter().flatten() {
            let mut t = s;
            t.swap(b, n);
            if seen.insert(t, ()).is_none() {
                queue.push_back(t);
            }
        }
    }
    // every permutation of 0..9 via Heap's algorithm
    let mut perm: [u8; 9] = [0, 1, 2, 3, 4, 5, 6, 7, 8];
    let mut agree = parity_rule(&perm, &goal, 3) == seen.contains_key(&perm);
    let mut c = [0usize; 9];
    let mut i = 1;
    while i < 9 {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            perm.swap(j, i);
            agree &= parity_rule(&perm, &goal, 3) == seen.contains_key(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    (seen.len(), agree)
}

fn properties(out: &mut Outcome, all_rows: &[(&Dataset, &[ReportRow])], cache: &WdCache) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ctxs: Vec<(GoalConvention, HeuristicContext)> = [GoalConvention::BlankTopLeft, GoalConvention::BlankBottomRight]
        .into_iter()
        .map(|c| (c, HeuristicContext::with_cache(c.goal_state(), cache).unwrap()))
        .collect();
    let mut wd_ge_md = 0;
    for k in 0..PROPERTY_STATES {
        let (conv, ctx) = &ctxs[k % 2];
        let s = random_solvable(&mut rng, *conv);
        if walking_distance(&s, ctx).unwrap() >= manhattan(&s, ctx) {
            wd_ge_md += 1;
        }
    }

    let mut deltas_ok = 0;
    let (_, ctx) = &ctxs[1];
    let mut s = random_solvable(&mut rng, GoalConvention::BlankBottomRight);
    for _ in 0..PROPERTY_STATES {
        let moves = s.legal_moves();
        let next = s.step(*moves.choose(&mut rng).unwrap()).unwrap();
        let dmd = manhattan(&next, ctx).abs_diff(manhattan(&s, ctx));
        let dwd = walking_distance(&next, ctx).unwrap().abs_diff(walking_distance(&s, ctx).unwrap());
        if dmd == 1 && dwd <= 1 {
            deltas_ok += 1;
        }
        s = next;
    }

    let (mut solutions, mut parity_ok, mut verified, mut hh_ok) = (0, 0, 0, 0);
    for (ds, rows) in all_rows {
        for (inst, row) in ds.instances.iter().zip(rows.iter()) {
            let ctx = HeuristicContext::with_cache(inst.goal(), cache).unwrap();
            if hh_report(&inst.start, &ctx).unwrap() == row.hh {
                hh_ok += 1;
            }
            if row.status != RowStatus::Solved {
                continue;
            }
            solutions += 1;
            let len = row.length.unwrap();
            if len % 2 == row.md % 2 && row.solution.len() as u32 == len {
                parity_ok += 1;
            }
            if replay(&inst.start, &row.solution) == Ok(inst.goal()) {
                verified += 1;
            }
        }
    }
    let report_rows: usize = all_rows.iter().map(|(_, r)| r.len()).sum();

    let (reachable, agree) = eight_puzzle_matches_rule();
    out.report(
        "10 properties",
        wd_ge_md == PROPERTY_STATES
            && deltas_ok == PROPERTY_STATES
            && parity_ok == solutions
            && verified == solutions
            && hh_ok == report_rows
            && reachable == 181_440
            && agree,
        format!(
            "WD >= MD {wd_ge_md}/{PROPERTY_STATES}; move deltas {deltas_ok}/{PROPERTY_STATES}; parity {parity_ok}/{solutions}; verified {verified}/{solutions}; row hh {hh_ok}/{report_rows}; 3x3 reachable {reachable}, rule agrees on all 9! boards: {agree}"
        ),
    );
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut out = Outcome { failed: Vec::new() };
    let cache = WdCache::new();
    let korf = load_dataset("korf100").unwrap();
    let hard = load_dataset("hard28").unwrap();
    let abc25 = load_dataset("abc25").unwrap();

    wd_tables(&mut out);
    worked_example(&mut out);
    korf_heuristics(&mut out, &korf, &cache);
    ida_oracle(&mut out, &korf, &cache);

    let korf_rows = run(&korf, Algorithm::BaStar, Budget::generated(KORF_BUDGET), &cache);
    korf_bastar(&mut out, &korf_rows);
    let hard_rows = run(&hard, Algorithm::BaStar, Budget::default(), &cache);
    hard_bastar(&mut out, &hard_rows);
    let ua_rows = run(&hard, Algorithm::UaStar, Budget::default(), &cache);
    ua_contrast(&mut out, &ua_rows, &hard_rows);
    let abc_rows = run(&abc25, Algorithm::BaStar, Budget::default(), &cache);
    abc(&mut out, &abc_rows);

    properties(
        &mut out,
        &[(&korf, &korf_rows), (&hard, &hard_rows), (&hard, &ua_rows), (&abc25, &abc_rows)],
        &cache,
    );

    if out.failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}", out.failed);
        ExitCode::FAILURE
    }
}
