#!/usr/bin/env python3
"""Builds tests/data/corpus_mixed.jsonl: 100 scored-sample records mixing SQL
and natural-language categories, drawn from the gold query file."""

import argparse
import json
import random

SQL_CATEGORIES = ["standard_sql", "multi_step", "reflection", "degenerate_dimension"]
NL_CASES = [
    ("ambiguity_clarification", "Show indicators for northern provinces recently.",
     "Could you specify the time range and the specific indicator?"),
    ("ambiguity_clarification", "How did the new car do lately?",
     "Which series do you mean, and over which period should I compare?"),
    ("constraint_follow_up", "Top provinces by sales.",
     "Should the ranking use amount or units, and for which quarter?"),
    ("constraint_follow_up", "Compare channels.",
     "Which metric should I compare the channels on: orders, units or amount?"),
    ("dimension_rejection", "Sales by dealer salesperson gender.",
     "The schema has no salesperson attributes, so I cannot break sales down by gender."),
    ("dimension_rejection", "Revenue by customer age band.",
     "Customer age is not recorded in any table, so this breakdown is not possible."),
    ("metric_rejection", "What is the customer satisfaction score per province?",
     "Customer satisfaction is not a metric available in this database."),
    ("metric_rejection", "Show the profit margin for each series.",
     "Profit margin cannot be computed because cost data is not stored."),
]
NL_ANSWERS = {
    "same": lambda gold: gold,
    "paraphrase": lambda gold: "Please tell me " + gold[0].lower() + gold[1:],
    "off_topic": lambda gold: "The weather in the capital is sunny today.",
    "forced_sql": lambda gold: "SELECT province_name FROM dim_area",
}


def wrap(answer, think="Check the schema and the request."):
    return f"<think>{think}</think>\n<answer>{answer}</answer>"


def read_gold(path):
    queries, current = [], None
    for line in open(path, encoding="utf-8"):
        line = line.rstrip("\n")
        if line.startswith("-- @"):
            current = {"id": line[4:], "sql": []}
            queries.append(current)
        elif current is not None and line:
            current["sql"].append(line)
    return [(q["id"], "\n".join(q["sql"])) for q in queries]


def sql_variant(rng, sql):
    kind = rng.choice(["exact", "exact", "case", "limit", "broken", "wrong_col", "no_tags", "overlong"])
    if kind == "exact":
        return kind, wrap(sql), None
    if kind == "case":
        return kind, wrap(sql.replace("SELECT", "select").replace("FROM", "from")), None
    if kind == "limit":
        return kind, wrap(f"SELECT * FROM ({sql}) LIMIT 2"), None
    if kind == "broken":
        return kind, wrap(sql.rsplit(" ", 1)[0] + " WHERE"), None
    if kind == "wrong_col":
        return kind, wrap(sql.replace("amount", "amount_total", 1)), None
    if kind == "no_tags":
        return kind, sql, None
    return kind, wrap(sql), rng.randint(3700, 5000)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gold", default="tests/data/gold_queries.sql")
    ap.add_argument("--out", default="tests/data/corpus_mixed.jsonl")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    gold = read_gold(args.gold)
    records = []
    for i in range(100):
        if i % 5 in (1, 3):
            category, question, target = NL_CASES[rng.randrange(len(NL_CASES))]
            kind = rng.choice(sorted(NL_ANSWERS))
            output = wrap(NL_ANSWERS[kind](target))
            token_count = None
        else:
            qid, target = gold[rng.randrange(len(gold))]
            category = rng.choice(SQL_CATEGORIES)
            question = f"Question for {qid}"
            kind, output, token_count = sql_variant(rng, target)
        rec = {"id": f"s{i:03d}", "question": question, "model_output": output, "gold_target": target,
               "category": category, "fixture_ref": "retail_star"}
        if token_count is not None:
            rec["token_count"] = token_count
        records.append(rec)
    with open(args.out, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
