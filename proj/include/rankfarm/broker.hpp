#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "rankfarm/catalog.hpp"

namespace httplib {
class Server;
}

namespace rankfarm {

/// Status code plus JSON body, independent of the HTTP transport.
struct Response {
  int status = 200;
  std::string body;
};

/// In-memory service registry and ranking endpoint.
///
/// Mutations are serialized and publish a new immutable state; ranking
/// requests read whichever state was committed when they started. Reports
/// are content-addressed by (revision, canonical request), so replaying a
/// request against an unchanged registry returns the same id and body.
class Broker {
 public:
  struct State {
    std::optional<QoSHierarchy> hierarchy;
    std::map<std::string, ServiceOffering> offerings;
    std::uint64_t revision = 0;
  };

  /// Loads `snapshot` when it names an existing file. `hierarchy` is the
  /// revision-0 hierarchy used when the snapshot does not provide one.
  explicit Broker(std::optional<std::filesystem::path> snapshot = std::nullopt,
                  std::optional<QoSHierarchy> hierarchy = std::nullopt);

  Response put_hierarchy(std::string_view body);
  Response put_offering(std::string_view id, std::string_view body);
  Response post_rank(std::string_view body);
  Response get_report(std::string_view id) const;
  Response healthz() const;

  std::shared_ptr<const State> state() const;
  std::uint64_t revision() const { return state()->revision; }

  /// Writes the registry to the configured snapshot path, if any.
  void save_snapshot() const;

 private:
  void publish(std::shared_ptr<const State> next);

  std::optional<std::filesystem::path> snapshot_path_;
  mutable std::shared_mutex state_mutex_;
  std::shared_ptr<const State> state_;
  std::mutex write_mutex_;
  mutable std::shared_mutex reports_mutex_;
  std::map<std::string, std::string> reports_;
};

/// Registers the /v1 routes on an httplib server.
void mount(Broker& broker, httplib::Server& server);

/// Stable 64-bit FNV-1a, used for report ids.
std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace rankfarm
