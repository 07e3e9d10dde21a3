#pragma once

#include "tceer/topology.hpp"

namespace tceer {

enum class BehaviorKind { Honest, Dropper, Modifier };

struct Behavior {
  BehaviorKind kind = BehaviorKind::Honest;
  double param = 0.0;  // drop or modify probability
};

struct NodeState {
  int id = 0;
  Position pos;
  double residual_energy = 0.0;
  int queue_len = 0;
  int capacity = 50;
  bool alive = true;
  Behavior behavior;
};

}  // namespace tceer
