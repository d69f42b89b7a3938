#pragma once

namespace so12 {

// every parallel kernel keeps a serial twin; tests and bench compare the two
enum class Exec { serial, parallel };

}  // namespace so12
