#!/usr/bin/env python3
"""Writes the retail_star toy fixture (star schema, fixed seed)."""

import argparse
import csv
import datetime as dt
import json
import pathlib
import random

SCHEMA = """\
CREATE TABLE dim_area (
  province_id INTEGER PRIMARY KEY,
  province_name TEXT NOT NULL,
  region_name TEXT NOT NULL,
  city_count INTEGER NOT NULL
);
CREATE TABLE dim_series (
  series_id INTEGER PRIMARY KEY,
  series_name TEXT NOT NULL,
  brand_name TEXT NOT NULL,
  product_line TEXT NOT NULL,
  launch_date DATE NOT NULL
);
CREATE TABLE dim_channel (
  channel_id INTEGER PRIMARY KEY,
  channel_name TEXT NOT NULL,
  channel_type TEXT NOT NULL
);
CREATE TABLE dim_date (
  day_id DATE PRIMARY KEY,
  month_id TEXT NOT NULL,
  quarter_id TEXT NOT NULL,
  year_id INTEGER NOT NULL,
  is_weekend BOOLEAN NOT NULL
);
CREATE TABLE fact_sales (
  sale_id INTEGER PRIMARY KEY,
  day_id DATE NOT NULL,
  province_id INTEGER NOT NULL,
  series_id INTEGER NOT NULL,
  channel_id INTEGER NOT NULL,
  quantity INTEGER NOT NULL,
  amount DECIMAL(12,2) NOT NULL,
  discount REAL
);
CREATE TABLE dwd_sale_target (
  target_id INTEGER PRIMARY KEY,
  day_id DATE NOT NULL,
  province_id INTEGER NOT NULL,
  series_id INTEGER NOT NULL,
  target_cnt INTEGER NOT NULL,
  module TEXT NOT NULL
);
"""

PROVINCES = [
    ("Guangdong", "South"), ("Zhejiang", "East"), ("Jiangsu", "East"), ("Shandong", "North"),
    ("Henan", "Central"), ("Sichuan", "West"), ("Hubei", "Central"), ("Hebei", "North"),
    ("Inner Mongolia", "North"), ("Fujian", "South"), ("Yunnan", "West"), ("Shanghai", "East"),
]
BRANDS = {
    "Aurora": ["A3", "A5", "A7 Sport", "L Series"],
    "Borealis": ["B1", "B2 Hybrid", "B9"],
    "Cirrus": ["C40", "C60 EV", "C80"],
    "Drift": ["D-One", "D-Max", "D-Van", "D-Coupe", "D-Lite"],
}
LINES = ["sedan", "suv", "ev", "van"]
CHANNELS = [("Central Store", "offline"), ("Partner Dealer", "offline"), ("Online Mall", "online"),
            ("Live Stream", "online"), ("Fleet Sales", "direct")]
MODULES = ["retail", "fleet", "export"]


def write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/fixtures/retail_star")
    ap.add_argument("--seed", type=int, default=20240630)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    area = [(i + 1, name, region, rng.randint(4, 21)) for i, (name, region) in enumerate(PROVINCES)]
    series = []
    for brand, names in BRANDS.items():
        for name in names:
            launch = dt.date(2019, 1, 1) + dt.timedelta(days=rng.randint(0, 1600))
            series.append((len(series) + 1, name, brand, rng.choice(LINES), launch.isoformat()))
    channel = [(i + 1, n, t) for i, (n, t) in enumerate(CHANNELS)]

    start = dt.date(2023, 7, 1)
    days = [start + dt.timedelta(days=i) for i in range(366)]
    date = [(d.isoformat(), d.strftime("%Y-%m"), f"{d.year}-Q{(d.month - 1) // 3 + 1}", d.year,
             "true" if d.weekday() >= 5 else "false") for d in days]

    sales = []
    for i in range(1200):
        d = rng.choice(days)
        qty = rng.randint(1, 12)
        price = rng.choice([12.5, 18.0, 22.75, 30.0, 41.2, 55.9])
        disc = "" if rng.random() < 0.2 else f"{rng.choice([0.0, 0.05, 0.1, 0.15]):.2f}"
        sales.append((i + 1, d.isoformat(), rng.randint(1, len(area)), rng.randint(1, len(series)),
                      rng.randint(1, len(channel)), qty, f"{qty * price * 1000:.2f}", disc))

    targets = []
    for i in range(400):
        d = rng.choice(days)
        province = 99 if i % 97 == 13 else rng.randint(1, len(area))
        targets.append((i + 1, d.isoformat(), province, rng.randint(1, len(series)),
                        rng.randint(5, 300), rng.choice(MODULES)))

    (out / "schema.sql").write_text(SCHEMA, encoding="utf-8")
    write(out / "dim_area.csv", ["province_id", "province_name", "region_name", "city_count"], area)
    write(out / "dim_series.csv", ["series_id", "series_name", "brand_name", "product_line", "launch_date"], series)
    write(out / "dim_channel.csv", ["channel_id", "channel_name", "channel_type"], channel)
    write(out / "dim_date.csv", ["day_id", "month_id", "quarter_id", "year_id", "is_weekend"], date)
    write(out / "fact_sales.csv", ["sale_id", "day_id", "province_id", "series_id", "channel_id", "quantity",
                                   "amount", "discount"], sales)
    write(out / "dwd_sale_target.csv", ["target_id", "day_id", "province_id", "series_id", "target_cnt", "module"],
          targets)
    manifest = {
        "name": "retail_star",
        "ddl": "schema.sql",
        "frozen_clock": "2024-06-30T12:00:00Z",
        "tables": [{"name": t, "data": f"{t}.csv"} for t in
                   ["dim_area", "dim_series", "dim_channel", "dim_date", "fact_sales", "dwd_sale_target"]],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
