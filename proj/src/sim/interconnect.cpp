/*
 * Copyright (c) 2026 The SPCM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "spcm/sim/interconnect.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::sim {

namespace {

struct PortIndex {
  std::unordered_map<std::string, Eigen::Index> index;
  Labels names;
  std::vector<std::size_t> block;  // owning block per port

  void add(const std::string& name, std::size_t owner, const char* what) {
    if (!index.emplace(name, static_cast<Eigen::Index>(names.size())).second) {
      throw LabelError(fmt::format("{} label '{}' is not unique across blocks", what, name));
    }
    names.push_back(name);
    block.push_back(owner);
  }

  Eigen::Index at(const std::string& name, const char* what) const {
    auto it = index.find(name);
    if (it == index.end()) throw LabelError(fmt::format("unresolved {} label '{}'", what, name));
    return it->second;
  }
};

// Depth-first search for a cycle in the output->output feedthrough graph.
std::optional<std::vector<Eigen::Index>> find_cycle(
    const std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>>& edges) {
  const auto n = edges.size();
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<Eigen::Index> parent_input(n, -1);
  std::vector<Eigen::Index> parent(n, -1);

  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == edges[node].size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const auto [target, via_input] = edges[node][next++];
      const auto t = static_cast<std::size_t>(target);
      if (color[t] == 1) {
        // Walk back from node to target. Stored as (output, input) pairs.
        std::vector<Eigen::Index> cycle{target, via_input};
        auto cur = static_cast<Eigen::Index>(node);
        while (cur != target) {
          cycle.push_back(cur);
          cycle.push_back(parent_input[static_cast<std::size_t>(cur)]);
          cur = parent[static_cast<std::size_t>(cur)];
        }
        cycle.push_back(target);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (color[t] == 0) {
        color[t] = 1;
        parent[t] = static_cast<Eigen::Index>(node);
        parent_input[t] = via_input;
        stack.emplace_back(t, 0);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

StateSpace lti_connect(std::span<const StateSpace> blocks, std::span<const Connection> connections,
                       const Labels& external_inputs, const Labels& external_outputs) {
  PortIndex inputs, outputs;
  Eigen::Index nx = 0;
  std::vector<Eigen::Index> x_off, u_off, y_off;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    x_off.push_back(nx);
    u_off.push_back(static_cast<Eigen::Index>(inputs.names.size()));
    y_off.push_back(static_cast<Eigen::Index>(outputs.names.size()));
    nx += static_cast<Eigen::Index>(blocks[b].num_states());
    for (const auto& name : blocks[b].input_names()) inputs.add(name, b, "input");
    for (const auto& name : blocks[b].output_names()) outputs.add(name, b, "output");
  }
  const auto nu = static_cast<Eigen::Index>(inputs.names.size());
  const auto ny = static_cast<Eigen::Index>(outputs.names.size());

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nx, nx);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nx, nu);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ny, nx);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(ny, nu);
  Labels state_names;
  std::unordered_set<std::string> seen_states;
  bool duplicate_states = false;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& blk = blocks[k];
    const auto n = static_cast<Eigen::Index>(blk.num_states());
    const auto m = static_cast<Eigen::Index>(blk.num_inputs());
    const auto p = static_cast<Eigen::Index>(blk.num_outputs());
    a.block(x_off[k], x_off[k], n, n) = blk.a();
    b.block(x_off[k], u_off[k], n, m) = blk.b();
    c.block(y_off[k], x_off[k], p, n) = blk.c();
    d.block(y_off[k], u_off[k], p, m) = blk.d();
    for (const auto& s : blk.state_names()) {
      duplicate_states |= !seen_states.insert(s).second;
      state_names.push_back(s);
    }
  }
  if (duplicate_states) {
    state_names.clear();
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      for (const auto& s : blocks[k].state_names()) state_names.push_back(fmt::format("b{}.{}", k, s));
    }
  }

  // u_all = M y_all + E u_ext
  Eigen::MatrixXd mconn = Eigen::MatrixXd::Zero(nu, ny);
  for (const auto& conn : connections) {
    const auto j = outputs.at(conn.from_output, "output");
    const auto i = inputs.at(conn.to_input, "input");
    mconn(i, j) += 1.0;
  }
  const auto ne = static_cast<Eigen::Index>(external_inputs.size());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nu, ne);
  for (Eigen::Index k = 0; k < ne; ++k) {
    e(inputs.at(external_inputs[static_cast<std::size_t>(k)], "input"), k) = 1.0;
  }
  const auto no = static_cast<Eigen::Index>(external_outputs.size());
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(no, ny);
  for (Eigen::Index k = 0; k < no; ++k) {
    sel(k, outputs.at(external_outputs[static_cast<std::size_t>(k)], "output")) = 1.0;
  }

  // Feedthrough graph: output j -> (input i) -> output k when M(i,j) != 0 and
  // D(k,i) != 0 within the same block.
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> edges(
      static_cast<std::size_t>(ny));
  for (Eigen::Index i = 0; i < nu; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      if (mconn(i, j) == 0.0) continue;
      for (Eigen::Index k = 0; k < ny; ++k) {
        if (d(k, i) != 0.0) edges[static_cast<std::size_t>(j)].emplace_back(k, i);
      }
    }
  }
  if (auto cycle = find_cycle(edges)) {
    std::vector<std::string> loop;
    for (std::size_t k = 0; k < cycle->size(); ++k) {
      const auto idx = static_cast<std::size_t>((*cycle)[k]);
      loop.push_back(k % 2 == 0 ? outputs.names[idx] : inputs.names[idx]);
    }
    throw AlgebraicLoopError(std::move(loop));
  }

  // Acyclic feedthrough graph => D M is nilpotent and I - D M invertible.
  Eigen::MatrixXd w = (Eigen::MatrixXd::Identity(ny, ny) - d * mconn).partialPivLu().inverse();
  Eigen::MatrixXd wc = w * c;
  Eigen::MatrixXd wde = w * d * e;
  Eigen::MatrixXd a_c = a + b * mconn * wc;
  Eigen::MatrixXd b_c = b * (mconn * wde + e);
  Eigen::MatrixXd c_c = sel * wc;
  Eigen::MatrixXd d_c = sel * wde;
  return StateSpace(std::move(a_c), std::move(b_c), std::move(c_c), std::move(d_c),
                    std::move(state_names), external_inputs, external_outputs);
}

}  // namespace spcm::sim
