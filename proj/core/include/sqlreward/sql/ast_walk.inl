// Traversal helpers for ast.h. Templated on constness so the same walk serves
// analysis (const) and rewriting (mutable) passes.
#pragma once

namespace sqlreward::sql {
namespace detail {

template <typename W, typename F>
void exprs_in_window(W& spec, F& f);

// Pre-order over `e` and its descendants without entering subqueries.
template <typename E, typename F>
void exprs_in_expr(E& e, F& f) {
  f(e);
  for (auto& arg : e.args) exprs_in_expr(arg, f);
  if (e.filter) exprs_in_expr(**e.filter, f);
  if (e.over) exprs_in_window(**e.over, f);
}

template <typename W, typename F>
void exprs_in_window(W& spec, F& f) {
  for (auto& p : spec.partition_by) exprs_in_expr(p, f);
  for (auto& o : spec.order_by) exprs_in_expr(o.expr, f);
  if (spec.frame) {
    if (spec.frame->start.offset) exprs_in_expr(*spec.frame->start.offset, f);
    if (spec.frame->end && spec.frame->end->offset) exprs_in_expr(*spec.frame->end->offset, f);
  }
}

template <typename Q, typename F>
void queries_in_query(Q& q, F& f);

template <typename E, typename F>
void queries_in_expr(E& e, F& f) {
  auto visit = [&f](auto& node) {
    if (node.subquery) queries_in_query(**node.subquery, f);
  };
  exprs_in_expr(e, visit);
}

template <typename T, typename F>
void queries_in_table(T& t, F& f) {
  if (t.subquery) queries_in_query(**t.subquery, f);
  if (t.left) queries_in_table(**t.left, f);
  if (t.right) queries_in_table(**t.right, f);
  if (t.on) queries_in_expr(*t.on, f);
}

template <typename Q, typename F>
void queries_in_query(Q& q, F& f) {
  f(q);
  for (auto& cte : q.ctes) queries_in_query(*cte.query, f);
  for (auto& core : q.cores) {
    for (auto& item : core.items) queries_in_expr(item.expr, f);
    for (auto& t : core.from) queries_in_table(t, f);
    if (core.where) queries_in_expr(*core.where, f);
    for (auto& g : core.group_by) queries_in_expr(g, f);
    if (core.having) queries_in_expr(*core.having, f);
    for (auto& w : core.windows) {
      auto visit = [&f](auto& node) {
        if (node.subquery) queries_in_query(**node.subquery, f);
      };
      exprs_in_window(w.spec, visit);
    }
  }
  for (auto& o : q.order_by) queries_in_expr(o.expr, f);
  if (q.limit) queries_in_expr(*q.limit, f);
  if (q.offset) queries_in_expr(*q.offset, f);
}

}  // namespace detail

template <typename Fn>
void for_each_query(const Query& query, Fn&& fn) {
  detail::queries_in_query(query, fn);
}

template <typename Fn>
void for_each_query(Query& query, Fn&& fn) {
  detail::queries_in_query(query, fn);
}

// Pre-order over an expression tree, stopping at subquery boundaries.
template <typename Fn>
void for_each_expr(const Expr& expr, Fn&& fn) {
  detail::exprs_in_expr(expr, fn);
}

template <typename Fn>
void for_each_expr(Expr& expr, Fn&& fn) {
  detail::exprs_in_expr(expr, fn);
}

// Every expression owned directly by one SELECT core (select list, join
// conditions, WHERE, GROUP BY, HAVING, named windows), subqueries excluded.
template <typename C, typename Fn>
void for_each_core_expr(C& core, Fn&& fn) {
  auto tables = [&fn](auto& self, auto& t) -> void {
    if (t.left) self(self, **t.left);
    if (t.right) self(self, **t.right);
    if (t.on) detail::exprs_in_expr(*t.on, fn);
  };
  for (auto& item : core.items) detail::exprs_in_expr(item.expr, fn);
  for (auto& t : core.from) tables(tables, t);
  if (core.where) detail::exprs_in_expr(*core.where, fn);
  for (auto& g : core.group_by) detail::exprs_in_expr(g, fn);
  if (core.having) detail::exprs_in_expr(*core.having, fn);
  for (auto& w : core.windows) detail::exprs_in_window(w.spec, fn);
}

}  // namespace sqlreward::sql
