#pragma once

#include "tsskp/model.hpp"

namespace tsskp::testing {

// Two printable items, W = V = 4, one printer of size 2, material units of
// size 1. Bringing one printer with two units of material beats packing
// either item physically: 0.7*0.8*1 + 0.3*0.8*2 = 1.04.
inline Instance example_one() {
  Instance inst;
  inst.items = {
      {4, 4, 1, true, 2, 1},
      {4, 4, 2, true, 2, 1},
  };
  inst.printer = {2, 2, 1};
  inst.material = {1, 1};
  inst.capacity_weight = 4;
  inst.capacity_volume = 4;
  inst.alpha = Rat(4, 5);
  inst.scenarios = {
      {Rat(7, 10), {1, 0}},
      {Rat(3, 10), {0, 1}},
  };
  return inst;
}

// Bound illustration: print times (2, 3), T = 5, W = 10, V = 12, printer
// 5x3. Greedy needs 2 printers for the first scenario and 3 for the second,
// the capacity caps are (2, 4), so Z = 2. Item weights, volumes, rewards and
// the probabilities play no role in the bound and are fillers.
inline Instance example_two() {
  Instance inst;
  inst.items = {
      {1, 1, 1, true, 1, 2},
      {1, 1, 1, true, 1, 3},
  };
  inst.printer = {5, 3, 5};
  inst.material = {1, 1};
  inst.capacity_weight = 10;
  inst.capacity_volume = 12;
  inst.alpha = Rat(4, 5);
  inst.scenarios = {
      {Rat(1, 2), {3, 1}},
      {Rat(1, 2), {1, 3}},
  };
  return inst;
}

}  // namespace tsskp::testing
