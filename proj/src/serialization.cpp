#include "mgids/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace mgids {

using nlohmann::json;

namespace {

// kernel: h -> s -> a -> b -> [S]
json kernel_to_json(const ZeroSumGame& env) {
  json hs = json::array();
  for (int h = 0; h < env.horizon; ++h) {
    json ss = json::array();
    for (int s = 0; s < env.num_states; ++s) {
      json as = json::array();
      for (int a = 0; a < env.num_actions_max; ++a) {
        json bs = json::array();
        for (int b = 0; b < env.num_actions_min; ++b) {
          auto row = env.kernel_row(h, s, a, b);
          bs.push_back(json(std::vector<double>(row.begin(), row.end())));
        }
        as.push_back(std::move(bs));
      }
      ss.push_back(std::move(as));
    }
    hs.push_back(std::move(ss));
  }
  return hs;
}

json reward_to_json(const ZeroSumGame& env) {
  json hs = json::array();
  for (int h = 0; h < env.horizon; ++h) {
    json ss = json::array();
    for (int s = 0; s < env.num_states; ++s) {
      json as = json::array();
      for (int a = 0; a < env.num_actions_max; ++a) {
        json bs = json::array();
        for (int b = 0; b < env.num_actions_min; ++b) bs.push_back(env.reward_at(h, s, a, b));
        as.push_back(std::move(bs));
      }
      ss.push_back(std::move(as));
    }
    hs.push_back(std::move(ss));
  }
  return hs;
}

}  // namespace

json to_json(const ZeroSumGame& env) {
  json j;
  j["horizon"] = env.horizon;
  j["num_states"] = env.num_states;
  j["actions_max"] = env.num_actions_max;
  j["actions_min"] = env.num_actions_min;
  j["initial_state"] = env.initial_state;
  j["kernel"] = kernel_to_json(env);
  j["reward"] = reward_to_json(env);
  return j;
}

ZeroSumGame zero_sum_from_json(const json& j) {
  ZeroSumGame env = ZeroSumGame::zeros(j.at("horizon").get<int>(), j.at("num_states").get<int>(),
                                       j.at("actions_max").get<int>(),
                                       j.at("actions_min").get<int>(),
                                       j.at("initial_state").get<int>());
  const auto& kernel = j.at("kernel");
  const auto& reward = j.at("reward");
  for (int h = 0; h < env.horizon; ++h)
    for (int s = 0; s < env.num_states; ++s)
      for (int a = 0; a < env.num_actions_max; ++a)
        for (int b = 0; b < env.num_actions_min; ++b) {
          const auto& row = kernel.at(h).at(s).at(a).at(b);
          if (static_cast<int>(row.size()) != env.num_states)
            throw std::invalid_argument("kernel row length mismatch");
          auto dst = env.kernel_row(h, s, a, b);
          for (int s2 = 0; s2 < env.num_states; ++s2) dst[s2] = row.at(s2).get<double>();
          env.reward_at(h, s, a, b) = reward.at(h).at(s).at(a).at(b).get<double>();
        }
  env.validate();
  return env;
}

json to_json(const GeneralSumGame& env) {
  json j;
  j["num_players"] = env.num_players;
  j["horizon"] = env.horizon;
  j["num_states"] = env.num_states;
  j["initial_state"] = env.initial_state;
  j["action_counts"] = env.action_counts;
  json kernel = json::array();
  for (int h = 0; h < env.horizon; ++h) {
    json ss = json::array();
    for (int s = 0; s < env.num_states; ++s) {
      json js = json::array();
      for (int joint = 0; joint < env.num_joint_actions(); ++joint) {
        auto row = env.kernel_row(h, s, joint);
        js.push_back(json(std::vector<double>(row.begin(), row.end())));
      }
      ss.push_back(std::move(js));
    }
    kernel.push_back(std::move(ss));
  }
  j["kernel"] = std::move(kernel);
  json rewards = json::array();
  for (int i = 0; i < env.num_players; ++i) {
    json hs = json::array();
    for (int h = 0; h < env.horizon; ++h) {
      json ss = json::array();
      for (int s = 0; s < env.num_states; ++s) {
        json js = json::array();
        for (int joint = 0; joint < env.num_joint_actions(); ++joint)
          js.push_back(env.rewards[i][env.row_index(h, s, joint)]);
        ss.push_back(std::move(js));
      }
      hs.push_back(std::move(ss));
    }
    rewards.push_back(std::move(hs));
  }
  j["rewards"] = std::move(rewards);
  return j;
}

GeneralSumGame general_sum_from_json(const json& j) {
  GeneralSumGame env;
  env.num_players = j.at("num_players").get<int>();
  env.horizon = j.at("horizon").get<int>();
  env.num_states = j.at("num_states").get<int>();
  env.initial_state = j.at("initial_state").get<int>();
  env.action_counts = j.at("action_counts").get<std::vector<int>>();
  env.kernel.assign(env.num_rows() * env.num_states, 0.0);
  env.rewards.assign(env.num_players, std::vector<double>(env.num_rows(), 0.0));
  const auto& kernel = j.at("kernel");
  const auto& rewards = j.at("rewards");
  for (int h = 0; h < env.horizon; ++h)
    for (int s = 0; s < env.num_states; ++s)
      for (int joint = 0; joint < env.num_joint_actions(); ++joint) {
        const auto& row = kernel.at(h).at(s).at(joint);
        std::size_t base = env.row_index(h, s, joint) * env.num_states;
        for (int s2 = 0; s2 < env.num_states; ++s2)
          env.kernel[base + s2] = row.at(s2).get<double>();
        for (int i = 0; i < env.num_players; ++i)
          env.rewards[i][env.row_index(h, s, joint)] =
              rewards.at(i).at(h).at(s).at(joint).get<double>();
      }
  env.validate();
  return env;
}

json to_json(const Belief& belief) {
  json j;
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    j["type"] = "finite";
    j["log_weights"] = fs->log_weights;
    json cands = json::array();
    for (const auto& c : fs->candidates) cands.push_back(to_json(c));
    j["candidates"] = std::move(cands);
    return j;
  }
  const auto& d = std::get<DirichletBelief>(belief);
  j["type"] = "dirichlet";
  j["base"] = to_json(d.base);
  j["alpha"] = d.alpha;
  return j;
}

Belief belief_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "finite") {
    FiniteSupportBelief fs;
    for (const auto& c : j.at("candidates")) fs.candidates.push_back(zero_sum_from_json(c));
    fs.log_weights = j.at("log_weights").get<std::vector<double>>();
    fs.validate();
    return fs;
  }
  if (type == "dirichlet") {
    DirichletBelief d;
    d.base = zero_sum_from_json(j.at("base"));
    d.alpha = j.at("alpha").get<std::vector<double>>();
    d.validate();
    return d;
  }
  throw std::invalid_argument("unknown belief type: " + type);
}

json to_json(const GsBelief& belief) {
  json j;
  if (const auto* fs = std::get_if<GsFiniteSupportBelief>(&belief)) {
    j["type"] = "finite";
    j["log_weights"] = fs->log_weights;
    json cands = json::array();
    for (const auto& c : fs->candidates) cands.push_back(to_json(c));
    j["candidates"] = std::move(cands);
    return j;
  }
  const auto& d = std::get<GsDirichletBelief>(belief);
  j["type"] = "dirichlet";
  j["base"] = to_json(d.base);
  j["alpha"] = d.alpha;
  return j;
}

GsBelief gs_belief_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "finite") {
    GsFiniteSupportBelief fs;
    for (const auto& c : j.at("candidates")) fs.candidates.push_back(general_sum_from_json(c));
    fs.log_weights = j.at("log_weights").get<std::vector<double>>();
    fs.validate();
    return fs;
  }
  if (type == "dirichlet") {
    GsDirichletBelief d;
    d.base = general_sum_from_json(j.at("base"));
    d.alpha = j.at("alpha").get<std::vector<double>>();
    d.validate();
    return d;
  }
  throw std::invalid_argument("unknown belief type: " + type);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace mgids
