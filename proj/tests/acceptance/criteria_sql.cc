#include <algorithm>
#include <cctype>
#include <random>
#include <string>
#include <vector>

#include "acceptance.h"
#include "sqlreward/exec/engine.h"
#include "sqlreward/mutate/consistency.h"
#include "sqlreward/reward/reward.h"
#include "sqlreward/sql/flatten.h"
#include "sqlreward/sql/parser.h"

namespace sqlreward::acceptance {
namespace {

// ---- a small query model, rendered to SQL and enumerated directly ----------

struct TableInfo {
  std::string name;
  std::vector<std::string> columns;
};

const std::vector<TableInfo>& tables() {
  static const std::vector<TableInfo> t = {
      {"fact_sales", {"sale_id", "day_id", "province_id", "series_id", "channel_id", "quantity", "amount", "discount"}},
      {"dwd_sale_target", {"target_id", "day_id", "province_id", "series_id", "target_cnt", "module"}},
      {"dim_area", {"province_id", "province_name", "region_name", "city_count"}},
      {"dim_series", {"series_id", "series_name", "brand_name", "product_line"}},
      {"dim_channel", {"channel_id", "channel_name", "channel_type"}},
      {"dim_date", {"day_id", "month_id", "quarter_id", "year_id"}},
  };
  return t;
}

struct JoinPair {
  int left, right;
  std::string key;
};

const std::vector<JoinPair>& join_pairs() {
  static const std::vector<JoinPair> p = {
      {0, 2, "province_id"}, {0, 3, "series_id"}, {0, 4, "channel_id"},
      {0, 5, "day_id"},      {1, 2, "province_id"}, {1, 3, "series_id"},
  };
  return p;
}

struct Source {
  int table = 0;
  std::string alias;  // empty when unaliased
};

struct ColRef {
  int source = 0;
  bool qualified = false;
  std::string name;
};

struct Lit {
  std::string text;  // as written in SQL
};

struct Cmp {
  bool col_rhs = false;
  bool lit_lhs = false;  // literal written on the left
  ColRef lhs;
  ColRef rhs_col;
  Lit rhs_lit;
  std::string op;
};

enum class PredKind { kCmp, kIn, kBetween, kOr };

struct Pred {
  PredKind kind = PredKind::kCmp;
  Cmp cmp;
  ColRef col;
  std::vector<Lit> list;  // IN items, or BETWEEN bounds
  bool negated = false;
  std::vector<Cmp> alternatives;  // OR
};

enum class ItemKind { kColumn, kCountStar, kAggregate, kLiteral };

struct Item {
  ItemKind kind = ItemKind::kColumn;
  ColRef col;
  std::string fn;
  Lit lit;
  std::string alias;
};

struct Order {
  bool aggregate = false;
  std::string fn;
  ColRef col;
  int direction = 0;  // 0 implicit, 1 ASC, 2 DESC
};

struct QueryModel {
  bool distinct = false;
  std::vector<Source> sources;
  bool left_join = false;
  bool inner_keyword = false;
  ColRef on_left, on_right;
  std::vector<Item> items;
  std::vector<Pred> where;
  std::vector<ColRef> group_by;
  std::vector<Order> order_by;
  int limit = -1;
};

// ---- generation -------------------------------------------------------------

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  QueryModel query(int max_preds = 3) {
    QueryModel q;
    q.distinct = coin(0.15);
    if (coin()) {
      const JoinPair& jp = join_pairs()[pick(static_cast<int>(join_pairs().size()))];
      q.sources = {{jp.left, alias()}, {jp.right, alias()}};
      q.left_join = coin();
      q.inner_keyword = coin();
      q.on_left = {0, true, jp.key};
      q.on_right = {1, true, jp.key};
    } else {
      q.sources = {{pick(static_cast<int>(tables().size())), alias()}};
    }
    const int n_items = 1 + pick(3);
    for (int i = 0; i < n_items; ++i) q.items.push_back(item(q));
    const int n_preds = pick(max_preds + 1);
    for (int i = 0; i < n_preds; ++i) q.where.push_back(pred(q));
    if (coin(0.3)) {
      const int n = 1 + pick(2);
      for (int i = 0; i < n; ++i) q.group_by.push_back(col(q));
    }
    if (coin(0.4)) {
      Order o;
      o.aggregate = coin(0.3);
      o.fn = agg_name();
      o.col = col(q);
      o.direction = pick(3);
      q.order_by.push_back(o);
    }
    if (coin(0.3)) q.limit = 1 + pick(20);
    return q;
  }

  ColRef col(const QueryModel& q) {
    ColRef c;
    c.source = pick(static_cast<int>(q.sources.size()));
    const auto& cols = tables()[q.sources[c.source].table].columns;
    c.name = cols[pick(static_cast<int>(cols.size()))];
    c.qualified = q.sources.size() > 1 ? coin(0.85) : coin(0.4);
    return c;
  }

  Lit lit() {
    static const std::vector<std::string> strings = {"'North'", "'east'", "'Live Stream'", "'2024-01-01'", "'A'"};
    if (coin(0.6)) return {std::to_string(pick(50))};
    if (coin(0.2)) return {std::to_string(pick(10)) + ".5"};
    return {strings[pick(static_cast<int>(strings.size()))]};
  }

  Cmp cmp(const QueryModel& q) {
    static const std::vector<std::string> ops = {"=", "<>", "<", "<=", ">", ">="};
    Cmp c;
    c.op = ops[pick(static_cast<int>(ops.size()))];
    c.lhs = col(q);
    c.col_rhs = coin(0.25);
    if (c.col_rhs) {
      c.rhs_col = col(q);
    } else {
      c.rhs_lit = lit();
      c.lit_lhs = coin(0.2);
    }
    return c;
  }

  Pred pred(const QueryModel& q) {
    Pred p;
    const int k = pick(10);
    if (k < 5) {
      p.kind = PredKind::kCmp;
      p.cmp = cmp(q);
    } else if (k < 7) {
      p.kind = PredKind::kIn;
      p.col = col(q);
      p.negated = coin(0.3);
      const int n = 1 + pick(4);
      for (int i = 0; i < n; ++i) p.list.push_back(lit());
    } else if (k < 9) {
      p.kind = PredKind::kBetween;
      p.col = col(q);
      p.negated = coin(0.3);
      p.list = {lit(), lit()};
    } else {
      p.kind = PredKind::kOr;
      const int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) p.alternatives.push_back(cmp(q));
    }
    return p;
  }

 private:
  std::string alias() {
    static const std::vector<std::string> names = {"f", "d", "t1", "t2", "x"};
    if (coin(0.4)) return {};
    return names[pick(static_cast<int>(names.size()))];
  }

  std::string agg_name() {
    static const std::vector<std::string> fns = {"SUM", "max", "Min", "AVG", "count"};
    return fns[pick(static_cast<int>(fns.size()))];
  }

  Item item(const QueryModel& q) {
    Item it;
    const int k = pick(10);
    if (k < 5) {
      it.kind = ItemKind::kColumn;
      it.col = col(q);
    } else if (k < 6) {
      it.kind = ItemKind::kCountStar;
    } else if (k < 9) {
      it.kind = ItemKind::kAggregate;
      it.fn = agg_name();
      it.col = col(q);
    } else {
      it.kind = ItemKind::kLiteral;
      it.lit = lit();
    }
    if (coin(0.3)) it.alias = "Out_" + std::to_string(pick(4));
    return it;
  }

  std::mt19937_64 rng_;
};

// Two sources must not share a binding.
void fix_bindings(QueryModel& q) {
  if (q.sources.size() == 2) {
    auto binding = [&](const Source& s) { return s.alias.empty() ? tables()[s.table].name : s.alias; };
    if (binding(q.sources[0]) == binding(q.sources[1])) q.sources[1].alias = "other";
  }
}

// ---- rendering --------------------------------------------------------------

class Renderer {
 public:
  Renderer(const QueryModel& q, std::mt19937_64& rng) : q_(q), rng_(rng) {}

  std::string query() {
    std::string s = kw("SELECT") + " ";
    if (q_.distinct) s += kw("DISTINCT") + " ";
    for (std::size_t i = 0; i < q_.items.size(); ++i) {
      if (i) s += ", ";
      s += item(q_.items[i]);
    }
    s += " " + kw("FROM") + " " + source(q_.sources[0]);
    if (q_.sources.size() == 2) {
      s += " " + (q_.left_join ? kw("LEFT JOIN") : (q_.inner_keyword ? kw("INNER JOIN") : kw("JOIN")));
      s += " " + source(q_.sources[1]) + " " + kw("ON") + " " + col(q_.on_left) + " = " + col(q_.on_right);
    }
    if (!q_.where.empty()) {
      s += " " + kw("WHERE") + " ";
      for (std::size_t i = 0; i < q_.where.size(); ++i) {
        if (i) s += " " + kw("AND") + " ";
        s += pred(q_.where[i]);
      }
    }
    if (!q_.group_by.empty()) {
      s += " " + kw("GROUP BY") + " ";
      for (std::size_t i = 0; i < q_.group_by.size(); ++i) {
        if (i) s += ", ";
        s += col(q_.group_by[i]);
      }
    }
    if (!q_.order_by.empty()) {
      s += " " + kw("ORDER BY") + " ";
      for (std::size_t i = 0; i < q_.order_by.size(); ++i) {
        const Order& o = q_.order_by[i];
        if (i) s += ", ";
        s += o.aggregate ? o.fn + "(" + col(o.col) + ")" : col(o.col);
        if (o.direction == 1) s += " " + kw("ASC");
        if (o.direction == 2) s += " " + kw("DESC");
      }
    }
    if (q_.limit >= 0) s += " " + kw("LIMIT") + " " + std::to_string(q_.limit);
    return s;
  }

  std::string pred(const Pred& p) {
    switch (p.kind) {
      case PredKind::kCmp:
        return cmp(p.cmp);
      case PredKind::kIn: {
        std::string s = col(p.col) + (p.negated ? " " + kw("NOT IN") + " (" : " " + kw("IN") + " (");
        for (std::size_t i = 0; i < p.list.size(); ++i) {
          if (i) s += ", ";
          s += p.list[i].text;
        }
        return s + ")";
      }
      case PredKind::kBetween:
        return col(p.col) + " " + (p.negated ? kw("NOT BETWEEN") : kw("BETWEEN")) + " " + p.list[0].text + " " +
               kw("AND") + " " + p.list[1].text;
      case PredKind::kOr: {
        std::string s = "(";
        for (std::size_t i = 0; i < p.alternatives.size(); ++i) {
          if (i) s += " " + kw("OR") + " ";
          s += cmp(p.alternatives[i]);
        }
        return s + ")";
      }
    }
    return {};
  }

 private:
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  std::string kw(std::string k) {
    if (coin()) {
      for (char& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return k;
  }

  std::string ident(const std::string& name) {
    const int k = std::uniform_int_distribution<int>(0, 3)(rng_);
    if (k == 0) return "\"" + name + "\"";
    if (k == 1) {
      std::string up = name;
      for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return up;
    }
    return name;
  }

  std::string binding(const Source& s) { return s.alias.empty() ? tables()[s.table].name : s.alias; }

  std::string source(const Source& s) {
    std::string out = ident(tables()[s.table].name);
    if (!s.alias.empty()) out += (coin() ? " " + kw("AS") + " " : " ") + ident(s.alias);
    return out;
  }

  std::string col(const ColRef& c) {
    std::string out = ident(c.name);
    if (c.qualified) out = ident(binding(q_.sources[c.source])) + "." + out;
    return out;
  }

  std::string cmp(const Cmp& c) {
    if (c.col_rhs) return col(c.lhs) + " " + c.op + " " + col(c.rhs_col);
    if (c.lit_lhs) return c.rhs_lit.text + " " + c.op + " " + col(c.lhs);
    return col(c.lhs) + " " + c.op + " " + c.rhs_lit.text;
  }

  std::string item(const Item& it) {
    std::string s;
    switch (it.kind) {
      case ItemKind::kColumn: s = col(it.col); break;
      case ItemKind::kCountStar: s = kw("COUNT") + "(*)"; break;
      case ItemKind::kAggregate: s = it.fn + "(" + col(it.col) + ")"; break;
      case ItemKind::kLiteral: s = it.lit.text; break;
    }
    if (!it.alias.empty()) s += (coin() ? " " + kw("AS") + " " : " ") + it.alias;
    return s;
  }

  const QueryModel& q_;
  std::mt19937_64& rng_;
};

// ---- direct enumeration of tagged components --------------------------------

std::string lower_unquoted(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\'' || c == '"' || c == '`') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

class Enumerator {
 public:
  explicit Enumerator(const QueryModel& q) : q_(q) {}

  std::vector<std::string> run() {
    if (q_.distinct) add("SELECT", "keyword", "distinct");
    for (const Item& it : q_.items) {
      switch (it.kind) {
        case ItemKind::kColumn: add("SELECT", "column", col(it.col)); break;
        case ItemKind::kLiteral: add("SELECT", "literal", lower_unquoted(it.lit.text)); break;
        case ItemKind::kCountStar: add("SELECT", "function-call", "count(*)"); break;
        case ItemKind::kAggregate:
          add("SELECT", "function-call", lower_unquoted(it.fn) + "(" + col(it.col) + ")");
          add("SELECT", "column", col(it.col));
          break;
      }
      if (!it.alias.empty()) add("SELECT", "alias-binding", lower_unquoted(it.alias));
    }
    add("FROM", "table", tables()[q_.sources[0].table].name);
    if (q_.sources.size() == 2) {
      add("JOIN", "table", tables()[q_.sources[1].table].name);
      add("JOIN", "keyword", q_.left_join ? "left join" : "inner join");
      Cmp on;
      on.op = "=";
      on.lhs = q_.on_left;
      on.col_rhs = true;
      on.rhs_col = q_.on_right;
      add("JOIN", "predicate-atom", cmp_text(on));
      cmp_leaves("JOIN", on);
    }
    for (const Pred& p : q_.where) {
      add("WHERE", "predicate-atom", pred_text(p));
      pred_leaves("WHERE", p);
    }
    for (const ColRef& g : q_.group_by) add("GROUP_BY", "column", col(g));
    for (const Order& o : q_.order_by) {
      std::string text = col(o.col);
      if (o.aggregate) {
        text = lower_unquoted(o.fn) + "(" + text + ")";
        add("ORDER_BY", "function-call", text);
      }
      add("ORDER_BY", "column", col(o.col));
      add("ORDER_BY", "direction", text + (o.direction == 2 ? " desc" : " asc"));
    }
    if (q_.limit >= 0) add("LIMIT", "quantity", std::to_string(q_.limit));
    return out_;
  }

 private:
  void add(const std::string& clause, const std::string& kind, const std::string& text) {
    const std::string c = clause + "|" + kind + "|" + text;
    for (const std::string& existing : out_) {
      if (existing == c) return;
    }
    out_.push_back(c);
  }

  std::string binding(const Source& s) const {
    return s.alias.empty() ? tables()[s.table].name : lower_unquoted(s.alias);
  }

  // A qualifier is dropped when the query has one source; otherwise it is
  // replaced by the table it names.
  std::string col(const ColRef& c) const {
    if (!c.qualified || q_.sources.size() == 1) return c.name;
    return tables()[q_.sources[c.source].table].name + "." + c.name;
  }

  std::string cmp_text(const Cmp& c) const {
    std::string l = col(c.lhs);
    std::string r = c.col_rhs ? col(c.rhs_col) : lower_unquoted(c.rhs_lit.text);
    if (c.lit_lhs) std::swap(l, r);
    if ((c.op == "=" || c.op == "<>") && r < l) std::swap(l, r);
    return l + " " + c.op + " " + r;
  }

  std::string pred_text(const Pred& p) const {
    switch (p.kind) {
      case PredKind::kCmp:
        return cmp_text(p.cmp);
      case PredKind::kIn: {
        std::vector<std::string> items;
        for (const Lit& l : p.list) {
          const std::string t = lower_unquoted(l.text);
          if (std::find(items.begin(), items.end(), t) == items.end()) items.push_back(t);
        }
        std::sort(items.begin(), items.end());
        std::string s = col(p.col) + (p.negated ? " not in (" : " in (");
        for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
        return s + ")";
      }
      case PredKind::kBetween:
        return col(p.col) + (p.negated ? " not between " : " between ") + lower_unquoted(p.list[0].text) +
               " and " + lower_unquoted(p.list[1].text);
      case PredKind::kOr: {
        std::vector<std::string> parts;
        for (const Cmp& c : p.alternatives) parts.push_back("(" + cmp_text(c) + ")");
        std::sort(parts.begin(), parts.end());
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " or " : "") + parts[i];
        return s;
      }
    }
    return {};
  }

  void cmp_leaves(const std::string& clause, const Cmp& c) {
    add(clause, "column", col(c.lhs));
    if (c.col_rhs) {
      add(clause, "column", col(c.rhs_col));
    } else {
      add(clause, "literal", lower_unquoted(c.rhs_lit.text));
    }
  }

  void pred_leaves(const std::string& clause, const Pred& p) {
    switch (p.kind) {
      case PredKind::kCmp:
        cmp_leaves(clause, p.cmp);
        break;
      case PredKind::kIn:
      case PredKind::kBetween:
        add(clause, "column", col(p.col));
        for (const Lit& l : p.list) add(clause, "literal", lower_unquoted(l.text));
        break;
      case PredKind::kOr:
        for (const Cmp& c : p.alternatives) cmp_leaves(clause, c);
        break;
    }
  }

  const QueryModel& q_;
  std::vector<std::string> out_;
};

double brute_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  std::size_t common = 0;
  for (const std::string& p : pred) {
    for (const std::string& g : gold) {
      if (p == g) {
        ++common;
        break;
      }
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(pred.size() + gold.size());
}

std::vector<std::string> engine_components(const sql::SqlComponentSet& set) {
  std::vector<std::string> out;
  for (const auto& c : set.components) out.push_back(sql::to_string(c));
  return out;
}

// Same components, compared as sorted lists.
bool same_components(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::string first_difference(std::vector<std::string> oracle, std::vector<std::string> engine) {
  std::sort(oracle.begin(), oracle.end());
  std::sort(engine.begin(), engine.end());
  for (const auto& o : oracle) {
    if (!std::binary_search(engine.begin(), engine.end(), o)) return "missing from engine: " + o;
  }
  for (const auto& e : engine) {
    if (!std::binary_search(oracle.begin(), oracle.end(), e)) return "extra in engine: " + e;
  }
  return "";
}

// A near neighbour of `q`: a few parts replaced with fresh random ones.
QueryModel perturb(const QueryModel& q, Gen& gen) {
  QueryModel p = q;
  const int edits = 1 + gen.pick(3);
  for (int e = 0; e < edits; ++e) {
    switch (gen.pick(6)) {
      case 0:
        if (!p.where.empty()) p.where[gen.pick(static_cast<int>(p.where.size()))] = gen.pred(p);
        break;
      case 1:
        if (p.where.size() < 3) p.where.push_back(gen.pred(p));
        break;
      case 2:
        if (!p.where.empty()) p.where.pop_back();
        break;
      case 3:
        p.items[gen.pick(static_cast<int>(p.items.size()))].col = gen.col(p);
        break;
      case 4:
        p.limit = p.limit >= 0 ? -1 : 10;
        break;
      case 5:
        p.distinct = !p.distinct;
        break;
    }
  }
  return p;
}

// The same query with its commutative parts reordered.
QueryModel equivalent_variant(const QueryModel& q, Gen& gen) {
  QueryModel v = q;
  std::shuffle(v.where.begin(), v.where.end(), gen.rng());
  auto flip = [&](Cmp& c) {
    if (c.op != "=" && c.op != "<>") return;
    if (c.col_rhs) {
      std::swap(c.lhs, c.rhs_col);
    } else {
      c.lit_lhs = !c.lit_lhs;
    }
  };
  for (Pred& p : v.where) {
    if (p.kind == PredKind::kIn) std::shuffle(p.list.begin(), p.list.end(), gen.rng());
    if (p.kind == PredKind::kCmp && gen.coin()) flip(p.cmp);
    if (p.kind == PredKind::kOr) {
      std::shuffle(p.alternatives.begin(), p.alternatives.end(), gen.rng());
      for (Cmp& c : p.alternatives) {
        if (gen.coin()) flip(c);
      }
    }
  }
  if (v.sources.size() == 2 && gen.coin()) std::swap(v.on_left, v.on_right);
  return v;
}

}  // namespace

Outcome c3_s_ast_oracle() {
  Outcome out;
  Gen gen(20240630);
  int pairs = 0, sets_checked = 0;
  for (int i = 0; i < 500; ++i) {
    QueryModel gold = gen.query();
    fix_bindings(gold);
    QueryModel pred = gen.coin(0.6) ? perturb(gold, gen) : gen.query();
    fix_bindings(pred);
    const std::string gold_sql = Renderer(gold, gen.rng()).query();
    const std::string pred_sql = Renderer(pred, gen.rng()).query();
    const auto gold_q = sql::try_parse(gold_sql);
    const auto pred_q = sql::try_parse(pred_sql);
    if (!gold_q || !pred_q) {
      out.fail("generated query does not parse: " + (gold_q ? pred_sql : gold_sql));
      continue;
    }
    const sql::SqlComponentSet gold_set = sql::flatten(*gold_q);
    const sql::SqlComponentSet pred_set = sql::flatten(*pred_q);
    const std::vector<std::string> gold_oracle = Enumerator(gold).run();
    const std::vector<std::string> pred_oracle = Enumerator(pred).run();
    for (const auto& [oracle, set, text] :
         {std::tuple{&gold_oracle, &gold_set, &gold_sql}, std::tuple{&pred_oracle, &pred_set, &pred_sql}}) {
      ++sets_checked;
      if (!same_components(*oracle, engine_components(*set))) {
        out.fail("component sets differ for [" + *text + "]: " + first_difference(*oracle, engine_components(*set)));
      }
    }
    const double engine = sql::s_ast(pred_set, gold_set);
    const double brute = brute_f1(pred_oracle, gold_oracle);
    if (engine != brute) out.fail("s_ast " + num(engine) + " != oracle " + num(brute) + " for " + pred_sql);
    ++pairs;
  }

  // AND-permutation pairs.
  int perms = 0;
  Gen pgen(77);
  while (perms < 1000) {
    QueryModel q = pgen.query();
    if (q.where.size() < 2) {
      while (q.where.size() < 2 + static_cast<std::size_t>(pgen.pick(2))) q.where.push_back(pgen.pred(q));
    }
    fix_bindings(q);
    QueryModel p = q;
    std::vector<std::size_t> order(q.where.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    do {
      std::shuffle(order.begin(), order.end(), pgen.rng());
    } while (std::is_sorted(order.begin(), order.end()));
    for (std::size_t k = 0; k < order.size(); ++k) p.where[k] = q.where[order[k]];
    for (Pred& pr : p.where) {
      if (pr.kind == PredKind::kIn) std::shuffle(pr.list.begin(), pr.list.end(), pgen.rng());
      std::shuffle(pr.alternatives.begin(), pr.alternatives.end(), pgen.rng());
    }
    const auto a = sql::try_parse(Renderer(q, pgen.rng()).query());
    const auto b = sql::try_parse(Renderer(p, pgen.rng()).query());
    if (!a || !b) {
      out.fail("permutation query does not parse");
    } else if (const double s = sql::s_ast(sql::flatten(*a), sql::flatten(*b)); s != 1.0) {
      out.fail("AND permutation scored " + num(s) + ": " + a->raw_text() + " vs " + b->raw_text());
    }
    ++perms;
  }
  out.detail = std::to_string(pairs) + " random pairs exact (" + std::to_string(sets_checked) +
               " component sets identical), " + std::to_string(perms) + " AND permutations at 1.0";
  return out;
}

Outcome c5_gold_self_score() {
  Outcome out;
  const exec::DatabaseFixture& db = testing::retail_star();
  semantic::HashedBagEmbedder embedder;
  const reward::RewardConfig cfg;
  const auto gold = testing::gold_queries();
  if (gold.size() < 50) out.fail("only " + std::to_string(gold.size()) + " gold queries");
  if (db.schema().size() < 5) out.fail("fixture has fewer than 5 tables");
  if (db.total_rows() < 1000) out.fail("fixture has fewer than 1000 rows");

  int joins = 0, ctes = 0, windows = 0, aggregates = 0, matched = 0;
  for (const auto& g : gold) {
    std::string upper = g.sql;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    joins += upper.find("JOIN") != std::string::npos;
    ctes += upper.find("WITH ") != std::string::npos;
    windows += upper.find("OVER") != std::string::npos;
    aggregates += upper.find("GROUP BY") != std::string::npos;

    reward::TaskSample s;
    s.question = g.id;
    s.model_output = "<think>gold</think><answer>" + g.sql + "</answer>";
    s.gold_target = g.sql;
    s.category = reward::Category::kStandardSql;
    s.fixture_ref = db.name();
    s.token_count = 10;
    const reward::AccResult acc = reward::r_acc(s, cfg, db, embedder);
    if (acc.score != 1.0 || acc.branch != reward::AccBranch::kExecMatch) {
      out.fail(g.id + ": r_acc " + num(acc.score) + " on branch " + reward::to_string(acc.branch));
    } else {
      ++matched;
    }
  }
  for (const auto& [n, what] : {std::pair{joins, "joins"}, std::pair{ctes, "CTEs"}, std::pair{windows, "window functions"},
                                std::pair{aggregates, "aggregations"}}) {
    if (n == 0) out.fail(std::string("gold corpus has no ") + what);
  }
  out.detail = std::to_string(matched) + "/" + std::to_string(gold.size()) + " gold queries exec_match with r_acc 1.0 (" +
               std::to_string(db.schema().size()) + " tables, " + std::to_string(db.total_rows()) + " rows; " +
               std::to_string(joins) + " join, " + std::to_string(ctes) + " CTE, " + std::to_string(windows) +
               " window, " + std::to_string(aggregates) + " group-by)";
  return out;
}

Outcome c9_consistency_gate() {
  Outcome out;
  Gen gen(909);
  int accepted = 0, rejected = 0;
  for (int i = 0; i < 100; ++i) {
    const bool deviate = i % 2 == 1;
    QueryModel base = gen.query();
    fix_bindings(base);
    std::vector<QueryModel> models = {base, equivalent_variant(base, gen), equivalent_variant(base, gen)};
    if (deviate) {
      // One sample changes meaning; its component set must differ from the
      // base as enumerated by the oracle.
      std::vector<std::string> base_set = Enumerator(base).run();
      std::sort(base_set.begin(), base_set.end());
      QueryModel changed;
      for (;;) {
        changed = perturb(base, gen);
        fix_bindings(changed);
        std::vector<std::string> set = Enumerator(changed).run();
        std::sort(set.begin(), set.end());
        if (set != base_set) break;
      }
      models[static_cast<std::size_t>(gen.pick(3))] = changed;
    }
    std::vector<std::string> script;
    for (const QueryModel& m : models) script.push_back(Renderer(m, gen.rng()).query());

    mutate::ScriptedGenerator generator(script);
    const mutate::ConsistencyResult r = mutate::consistency_verify(generator, "question " + std::to_string(i), 3);
    if (generator.calls() != 3) out.fail("case " + std::to_string(i) + ": generator called " + std::to_string(generator.calls()) + " times");
    if (r.samples != script) out.fail("case " + std::to_string(i) + ": samples not kept in order");
    if (deviate) {
      if (r.accepted) out.fail("accepted a deviating triple: " + script[0] + " | " + script[1] + " | " + script[2]);
      else ++rejected;
    } else if (!r.accepted) {
      out.fail("rejected an equivalent triple (" + r.reason + "): " + script[0] + " | " + script[1] + " | " + script[2]);
    } else {
      ++accepted;
      if (r.sql != *std::min_element(script.begin(), script.end())) out.fail("accepted sql is not the smallest sample");
    }
  }
  out.detail = std::to_string(accepted) + "/50 equivalent triples accepted, " + std::to_string(rejected) +
               "/50 triples with one deviation rejected";
  return out;
}

}  // namespace sqlreward::acceptance
