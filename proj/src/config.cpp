#include "pmms/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pmms {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// unit token -> factor into the canonical unit of the receiving field
// (W for powers, ms for times, bytes for sizes, Hz, m, counts as-is)
double unit_factor(const std::string& unit) {
    static const std::map<std::string, double> factors = {
        {"", 1.0},        {"W", 1.0},      {"mW", 1e-3},        {"uW", 1e-6},
        {"MB", 1e6},      {"KB", 1e3},     {"B", 1.0},          {"GB", 1e9},
        {"msec", 1.0},    {"ms", 1.0},     {"sec", 1000.0},     {"s", 1000.0},
        {"Hz", 1.0},      {"MHz", 1e6},    {"GHz", 1e9},        {"m", 1.0},
        {"packets", 1.0}, {"packets/sec", 1.0}, {"packets/s", 1.0},
        {"nodes", 1.0},   {"node", 1.0},   {"ticks", 1.0}};
    const auto it = factors.find(unit);
    if (it == factors.end()) throw config_error("unknown unit '" + unit + "'");
    return it->second;
}

// numbers may carry a unit suffix ("100 mW", "2 msec") and a '*' product
// ("2*1e6 Hz")
double parse_number(const std::string& raw) {
    const std::string v = trim(raw);
    std::size_t i = 0;
    while (i < v.size() &&
           (std::isdigit(static_cast<unsigned char>(v[i])) || v[i] == '.' || v[i] == '-' ||
            v[i] == '+' || v[i] == 'e' || v[i] == 'E' || v[i] == '*'))
        ++i;
    const std::string num = trim(v.substr(0, i));
    const std::string unit = trim(v.substr(i));
    if (num.empty()) throw config_error("no numeric value in '" + raw + "'");

    double value = 1.0;
    std::size_t start = 0;
    while (start <= num.size()) {
        const std::size_t star = num.find('*', start);
        const std::string part = num.substr(start, star == std::string::npos ? star : star - start);
        try {
            std::size_t used = 0;
            value *= std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::logic_error&) {
            throw config_error("bad number '" + raw + "'");
        }
        if (star == std::string::npos) break;
        start = star + 1;
    }
    return value * unit_factor(unit);
}

// "3 mW to 4 mW" / "1 to 5" / "5..10"
std::pair<double, double> parse_band(const std::string& raw) {
    std::string v = trim(raw);
    std::size_t sep = v.find(" to ");
    std::size_t sep_len = 4;
    if (sep == std::string::npos) {
        sep = v.find("..");
        sep_len = 2;
    }
    if (sep == std::string::npos) {
        const double x = parse_number(v);
        return {x, x};
    }
    return {parse_number(v.substr(0, sep)), parse_number(v.substr(sep + sep_len))};
}

bool parse_bool(const std::string& raw) {
    std::string v = trim(raw);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw config_error("bad boolean '" + raw + "'");
}

} // namespace

radio_config sim_config::radio() const {
    radio_config r;
    r.trans_power = trans_power_w;
    r.frequency = wireless_frequency_hz;
    r.rssi_max = rssi_max_w;
    r.warning_low = rssi_threshold_low_w;
    r.warning_high = rssi_threshold_high_w;
    r.handoff_low = rssi_handoff_low_w;
    r.handoff_high = rssi_handoff_high_w;
    r.next_ap_high = next_ap_high_w;
    r.receive_threshold = receivepower_threshold_w;
    r.noise_stddev_fraction = noise_stddev_fraction;
    r.antenna_height = antenna_height_m;
    r.scale_reference = rssi_scale_reference_m;
    return r;
}

delay_config sim_config::delays() const {
    delay_config d;
    d.min_channel_time_ms = min_channel_time_ms;
    d.max_channel_time_ms = max_channel_time_ms;
    d.ping_time_ms = ping_time_ms;
    d.oneway_time_ms = oneway_time_ms;
    d.n_channels = n_channels;
    d.responding_channels = responding_channels;
    d.iapp_enabled = iapp_enabled;
    d.surcharge_medium_ms = surcharge_medium_ms;
    d.surcharge_high_ms = surcharge_high_ms;
    d.reassoc_jitter_ms = reassoc_jitter_ms;
    d.collision_per_node_ms = collision_per_node_ms;
    d.proc_capacity_pps = proc_cap_pps;
    d.arrival_max_pps = arrivalrate_max_pps;
    d.arrival_avg_pps = arrivalrate_avg_pps;
    d.arrival_min_pps = arrivalrate_min_pps;
    d.drop_threshold_ms = drop_threshold_ms;
    d.packet_size_bytes = packet_size_bytes;
    d.load_low_max_nodes = load_low_max_nodes;
    d.load_high_min_nodes = load_high_min_nodes;
    return d;
}

reservation_config sim_config::reservations() const {
    reservation_config r;
    r.total_buffer = buffer_size;
    r.stage1_fraction = stage1_fraction;
    r.stage2_audio_fraction = stage2_audio_fraction;
    r.stage2_text_fraction = stage2_text_fraction;
    r.timeout_ticks = reservation_timeout_ticks;
    r.emergency_reserve_fraction = emergency_reserve_fraction;
    return r;
}

mobility_config sim_config::history_mobility() const {
    return {history_min_aps, history_max_aps, beta, dwell_min, dwell_max};
}

mobility_config sim_config::test_mobility() const {
    return {test_min_aps, test_max_aps, beta, dwell_min, dwell_max};
}

prediction_config sim_config::predictor() const {
    return {lt_margin, receivepower_threshold_w};
}

std::uint64_t sim_config::effective_history_seed() const {
    return history_seed != 0 ? history_seed : mix_seed(seed, 0x716873);
}

std::uint64_t sim_config::effective_test_seed() const {
    return test_seed != 0 ? test_seed : mix_seed(seed, 0x747374);
}

void sim_config::set(const std::string& key, const std::string& value) {
    using setter = std::function<void(sim_config&, const std::string&)>;
    const auto num = [](double sim_config::*field) {
        return [field](sim_config& c, const std::string& v) { c.*field = parse_number(v); };
    };
    const auto num_int = [](int sim_config::*field) {
        return [field](sim_config& c, const std::string& v) {
            c.*field = static_cast<int>(std::llround(parse_number(v)));
        };
    };
    const auto num_i64 = [](std::int64_t sim_config::*field) {
        return [field](sim_config& c, const std::string& v) {
            c.*field = std::llround(parse_number(v));
        };
    };
    const auto num_u64 = [](std::uint64_t sim_config::*field) {
        return [field](sim_config& c, const std::string& v) {
            c.*field = static_cast<std::uint64_t>(std::llround(parse_number(v)));
        };
    };
    const auto num_bytes = [](byte_count sim_config::*field) {
        return [field](sim_config& c, const std::string& v) {
            c.*field = std::llround(parse_number(v));
        };
    };

    static const std::map<std::string, setter> table = {
        {"buffer_size", num_bytes(&sim_config::buffer_size)},
        {"audio_file_size", num_bytes(&sim_config::audio_file_size)},
        {"text_file_size", num_bytes(&sim_config::text_file_size)},
        {"minChannelTime", num(&sim_config::min_channel_time_ms)},
        {"maxChannelTime", num(&sim_config::max_channel_time_ms)},
        {"pingTime", num(&sim_config::ping_time_ms)},
        {"onewayTime", num(&sim_config::oneway_time_ms)},
        {"RSSI_max", num(&sim_config::rssi_max_w)},
        {"RSSI_threshold",
         [](sim_config& c, const std::string& v) {
             const auto band = parse_band(v);
             c.rssi_threshold_low_w = band.first;
             c.rssi_threshold_high_w = band.second;
         }},
        {"RSSI_handoff",
         [](sim_config& c, const std::string& v) {
             const auto band = parse_band(v);
             c.rssi_handoff_low_w = band.first;
             c.rssi_handoff_high_w = band.second;
         }},
        {"antenna_height", num(&sim_config::antenna_height_m)},
        {"wireless_frequency", num(&sim_config::wireless_frequency_hz)},
        {"bandwidth", num(&sim_config::bandwidth_hz)},
        {"receivepower_threshold", num(&sim_config::receivepower_threshold_w)},
        {"trans_power", num(&sim_config::trans_power_w)},
        {"proc_cap", num(&sim_config::proc_cap_pps)},
        {"arrivalrate_max", num(&sim_config::arrivalrate_max_pps)},
        {"arrivalrate_avg", num(&sim_config::arrivalrate_avg_pps)},
        {"arrivalrate_min", num(&sim_config::arrivalrate_min_pps)},
        {"loadMax",
         [](sim_config& c, const std::string& v) {
             c.load_high_min_nodes = static_cast<int>(std::llround(parse_band(v).first));
         }},
        {"loadAvg",
         [](sim_config& c, const std::string& v) {
             const auto band = parse_band(v);
             c.load_low_max_nodes = static_cast<int>(std::llround(band.first));
             c.load_high_min_nodes = static_cast<int>(std::llround(band.second));
         }},
        {"loadMin",
         [](sim_config& c, const std::string& v) {
             const auto band = parse_band(v);
             c.load_min_nodes = static_cast<int>(std::llround(band.first));
             c.load_low_max_nodes = static_cast<int>(std::llround(band.second));
         }},
        {"ap_rows", num_int(&sim_config::ap_rows)},
        {"ap_cols", num_int(&sim_config::ap_cols)},
        {"ap_spacing", num(&sim_config::ap_spacing_m)},
        {"seed", num_u64(&sim_config::seed)},
        {"history_seed", num_u64(&sim_config::history_seed)},
        {"test_seed", num_u64(&sim_config::test_seed)},
        {"n_history", num_int(&sim_config::n_history)},
        {"n_test", num_int(&sim_config::n_test)},
        {"n_delay", num_int(&sim_config::n_delay)},
        {"n_drop", num_int(&sim_config::n_drop)},
        {"beta", num(&sim_config::beta)},
        {"dwell_min", num_int(&sim_config::dwell_min)},
        {"dwell_max", num_int(&sim_config::dwell_max)},
        {"history_min_aps", num_int(&sim_config::history_min_aps)},
        {"history_max_aps", num_int(&sim_config::history_max_aps)},
        {"test_min_aps", num_int(&sim_config::test_min_aps)},
        {"test_max_aps", num_int(&sim_config::test_max_aps)},
        {"min_support", num_i64(&sim_config::min_support)},
        {"min_confidence", num(&sim_config::min_confidence)},
        {"max_head_len", num_int(&sim_config::max_head_len)},
        {"lt_margin", num(&sim_config::lt_margin)},
        {"lt_progress", num(&sim_config::lt_progress)},
        {"lt_error_rate", num(&sim_config::lt_error_rate)},
        {"noise_stddev_fraction", num(&sim_config::noise_stddev_fraction)},
        {"next_ap_high_threshold", num(&sim_config::next_ap_high_w)},
        {"tm_x", num_int(&sim_config::tm_x)},
        {"rssi_scale_reference", num(&sim_config::rssi_scale_reference_m)},
        {"n_channels", num_int(&sim_config::n_channels)},
        {"responding_channels", num_int(&sim_config::responding_channels)},
        {"iapp",
         [](sim_config& c, const std::string& v) { c.iapp_enabled = parse_bool(v); }},
        {"surcharge_medium", num(&sim_config::surcharge_medium_ms)},
        {"surcharge_high", num(&sim_config::surcharge_high_ms)},
        {"reassoc_jitter", num(&sim_config::reassoc_jitter_ms)},
        {"collision_per_node", num(&sim_config::collision_per_node_ms)},
        {"drop_threshold", num(&sim_config::drop_threshold_ms)},
        {"packet_size", num_int(&sim_config::packet_size_bytes)},
        {"load_mean_nodes", num(&sim_config::load_mean_nodes)},
        {"stage1_fraction", num(&sim_config::stage1_fraction)},
        {"stage2_audio_fraction", num(&sim_config::stage2_audio_fraction)},
        {"stage2_text_fraction", num(&sim_config::stage2_text_fraction)},
        {"reservation_timeout", num_i64(&sim_config::reservation_timeout_ticks)},
        {"emergency_reserve_fraction", num(&sim_config::emergency_reserve_fraction)},
        {"audio_tos", num_int(&sim_config::audio_tos)},
    };

    const auto it = table.find(trim(key));
    if (it == table.end()) throw config_error("unknown configuration key '" + trim(key) + "'");
    try {
        it->second(*this, value);
    } catch (const config_error& e) {
        throw config_error("key '" + trim(key) + "': " + e.what());
    }
}

void sim_config::validate() const {
    if (ap_rows < 2 || ap_cols < 2) throw config_error("AP grid must be at least 2x2");
    if (rssi_threshold_low_w <= rssi_handoff_high_w)
        throw config_error("warning band must sit strictly above the handoff band");
    if (trans_power_w <= 0 || rssi_max_w <= 0 || receivepower_threshold_w <= 0)
        throw config_error("powers must be positive");
    if (min_support < 1) throw config_error("min_support must be >= 1");
    if (n_history < 1 || n_test < 1 || n_delay < 1 || n_drop < 1)
        throw config_error("run sizes must be >= 1");
    if (beta < 0.0 || beta > 1.0) throw config_error("beta must be within [0, 1]");
    if (lt_progress <= 0.0 || lt_progress > 1.0)
        throw config_error("lt_progress must be within (0, 1]");
    if (stage1_fraction < 0.0 || stage1_fraction > 1.0 || stage2_audio_fraction < 0.0 ||
        stage2_audio_fraction > 1.0 || stage2_text_fraction < 0.0 || stage2_text_fraction > 1.0)
        throw config_error("reservation fractions must be within [0, 1]");
    if (min_channel_time_ms <= 0.0 || max_channel_time_ms < min_channel_time_ms)
        throw config_error("channel times must satisfy 0 < min <= max");
}

sim_config sim_config::from_stream(std::istream& in, const std::string& origin) {
    sim_config cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
        try {
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const config_error& e) {
            throw config_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

sim_config sim_config::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open config file " + file.string());
    return from_stream(in, file.string());
}

} // namespace pmms
