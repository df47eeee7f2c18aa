#include "omring/config.hpp"
#include "omring/tasks.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

constexpr const char *task_list = "pump|spectrum|phase|bandwidth|contour|noise|squeezing|classify|verify";

int run(const std::string &task_text, const std::string &config_path, const std::string &out_path,
        const std::string &format_text, unsigned threads)
{
    using namespace omring;
    const Task task = parse_task(task_text);
    RunConfig config = load_config(config_path, task);
    if (!out_path.empty())
        config.out_path = out_path;
    if (!format_text.empty())
        config.format = parse_format(format_text);
    if (threads)
        config.threads = threads;

    const TaskResult result = execute(config);

    // Render fully before touching the output file.
    std::ostringstream body;
    if (config.format == OutputFormat::json)
        write_json(body, result.table);
    else
        write_csv(body, result.table);

    if (config.out_path)
    {
        std::ofstream file(*config.out_path, std::ios::binary);
        if (!file || !(file << body.str()) || !file.flush())
            throw ConfigError("cannot write output file '" + *config.out_path + "'");
    }
    else
    {
        std::cout << body.str() << std::flush;
    }

    if (result.failure)
    {
        std::cerr << "omring: error kind=verify exit=4 message=\"" << *result.failure << "\"\n";
        return 4;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Optomechanical ring resonator non-reciprocity simulator"};
    app.set_version_flag("--version", omring::version_string);

    std::string task;
    std::string config_path;
    std::string out_path;
    std::string format;
    unsigned threads = 0;
    app.add_option("task", task, std::string("Task to run: ") + task_list)->required();
    app.add_option("-c,--config", config_path, "Configuration file")->required();
    app.add_option("-o,--out", out_path, "Output file (default: standard output)");
    app.add_option("-f,--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-j,--threads", threads, "Worker threads (default: OMRING_THREADS or 1)")
        ->check(CLI::Range(1u, 1024u));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::string message = e.what();
        for (char &c : message)
            if (c == '\n')
                c = ' ';
        std::cerr << "omring: error kind=usage exit=2 message=\"" << message << "\"\n";
        return 2;
    }

    try
    {
        return run(task, config_path, out_path, format, threads);
    }
    catch (const std::exception &e)
    {
        std::cerr << omring::error_line(e) << '\n';
        return omring::exit_code_for(e);
    }
}
