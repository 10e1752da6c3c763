// Copyright 2026 The vqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqe/profiler.hpp"

#include <fmt/format.h>

#include <nlohmann/json.hpp>

namespace vqe {

ProfileNode* ProfileNode::add_child(std::string child_label, bool child_batched) {
  auto c = std::make_unique<ProfileNode>();
  c->label = std::move(child_label);
  c->batched = child_batched;
  children.push_back(std::move(c));
  return children.back().get();
}

std::chrono::nanoseconds ProfileTimer::leave(Clock::time_point start, std::chrono::nanoseconds& inclusive) {
  auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  auto in_children = child_time_.back();
  child_time_.pop_back();
  if (!child_time_.empty()) child_time_.back() += elapsed;
  inclusive += elapsed;
  return elapsed > in_children ? elapsed - in_children : std::chrono::nanoseconds{0};
}

namespace {

// Scope guard so exceptions still unwind the timer stack.
class Timed {
 public:
  Timed(ProfileTimer* timer, ProfileNode* node) : timer_(timer), node_(node), start_(ProfileTimer::Clock::now()) {
    timer_->enter();
  }
  ~Timed() { node_->exclusive += timer_->leave(start_, node_->inclusive); }
  Timed(const Timed&) = delete;
  Timed& operator=(const Timed&) = delete;

 private:
  ProfileTimer* timer_;
  ProfileNode* node_;
  ProfileTimer::Clock::time_point start_;
};

template <class Op>
void copy_rows_read(Op& inner, ProfileNode* node) {
  if (auto* r = dynamic_cast<const StorageReader*>(&inner)) node->rows_read = r->rows_read();
}

}  // namespace

ProfiledBatch::ProfiledBatch(std::unique_ptr<BatchOperator> inner, ProfileNode* node, ProfileTimer* timer)
    : BatchOperator(inner->output_vars(), inner->sort_var()), inner_(std::move(inner)), node_(node), timer_(timer) {}

BatchHandle ProfiledBatch::next() {
  ++node_->stats.next_calls;
  BatchHandle b;
  {
    Timed t(timer_, node_);
    b = inner_->next();
  }
  if (b) node_->stats.rows_out += b->active_count();
  return b;
}

void ProfiledBatch::skip(TermId key) {
  ++node_->stats.skip_calls;
  Timed t(timer_, node_);
  inner_->skip(key);
}

void ProfiledBatch::reset() {
  ++node_->stats.reset_calls;
  Timed t(timer_, node_);
  inner_->reset();
}

void ProfiledBatch::finalize() { copy_rows_read(*inner_, node_); }

ProfiledRow::ProfiledRow(std::unique_ptr<RowOperator> inner, ProfileNode* node, ProfileTimer* timer)
    : RowOperator(inner->output_vars(), inner->sort_var()), inner_(std::move(inner)), node_(node), timer_(timer) {}

const RowTuple* ProfiledRow::next() {
  ++node_->stats.next_calls;
  const RowTuple* r;
  {
    Timed t(timer_, node_);
    r = inner_->next();
  }
  if (r) ++node_->stats.rows_out;
  return r;
}

void ProfiledRow::skip(TermId key) {
  ++node_->stats.skip_calls;
  Timed t(timer_, node_);
  inner_->skip(key);
}

void ProfiledRow::reset() {
  ++node_->stats.reset_calls;
  Timed t(timer_, node_);
  inner_->reset();
}

void ProfiledRow::finalize() { copy_rows_read(*inner_, node_); }

std::string abbreviate_count(std::uint64_t n) {
  if (n < 1000) return std::to_string(n);
  double v = static_cast<double>(n);
  const char* unit = "K";
  v /= 1e3;
  if (v >= 999.95) {
    v /= 1e3;
    unit = "M";
  }
  if (v >= 999.95) {
    v /= 1e3;
    unit = "B";
  }
  return v < 99.95 ? fmt::format("{:.1f}{}", v, unit) : fmt::format("{:.0f}{}", v, unit);
}

namespace {

std::string annotate(const ProfileNode& n, double total_ns) {
  std::string out = n.label + ", results: " + abbreviate_count(n.stats.rows_out);
  if (n.stats.rows_out >= 1000) out += " [" + std::to_string(n.stats.rows_out) + "]";
  out += " (next: " + abbreviate_count(n.stats.next_calls);
  if (n.stats.skip_calls > 0) out += ", skip: " + abbreviate_count(n.stats.skip_calls);
  out += ")";
  if (n.rows_read) out += ", rows read: " + abbreviate_count(*n.rows_read);
  double share = total_ns > 0 ? 100.0 * static_cast<double>(n.exclusive.count()) / total_ns : 0.0;
  out += fmt::format(", wall time: {:.1f}%", share);
  if (n.batched) out += ", batched";
  return out;
}

void render_into(const ProfileNode& n, double total_ns, const std::string& prefix, const std::string& child_prefix,
                 std::string& out) {
  out += prefix + annotate(n, total_ns) + "\n";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    bool last = i + 1 == n.children.size();
    render_into(*n.children[i], total_ns, child_prefix + (last ? "`- " : "+- "), child_prefix + (last ? "   " : "|  "),
                out);
  }
}

nlohmann::json node_json(const ProfileNode& n, double total_ns) {
  nlohmann::json j;
  j["label"] = n.label;
  j["results"] = n.stats.rows_out;
  j["next"] = n.stats.next_calls;
  j["skip"] = n.stats.skip_calls;
  j["reset"] = n.stats.reset_calls;
  j["exclusive_ns"] = n.exclusive.count();
  j["inclusive_ns"] = n.inclusive.count();
  j["share"] = total_ns > 0 ? 100.0 * static_cast<double>(n.exclusive.count()) / total_ns : 0.0;
  j["batched"] = n.batched;
  if (n.rows_read) j["rows_read"] = *n.rows_read;
  j["children"] = nlohmann::json::array();
  for (const auto& c : n.children) j["children"].push_back(node_json(*c, total_ns));
  return j;
}

}  // namespace

std::string render_profile(const ProfileNode& root) {
  std::string out;
  render_into(root, static_cast<double>(root.inclusive.count()), "", "", out);
  return out;
}

std::string profile_to_json(const ProfileNode& root) {
  return node_json(root, static_cast<double>(root.inclusive.count())).dump(2);
}

}  // namespace vqe
