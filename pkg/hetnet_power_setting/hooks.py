app_name = "hetnet_power_setting"
app_title = "HetNet Power Setting"
app_publisher = "hetnet_power_setting contributors"
app_description = "Best-reply downlink power setting game for two-tier networks with carrier aggregation"
app_license = "mit"

# Command dispatch
# ----------------

commands = {
	"generate": "hetnet_power_setting.cli.cmd_generate",
	"play": "hetnet_power_setting.cli.cmd_play",
	"simulate": "hetnet_power_setting.cli.cmd_simulate",
	"verify": "hetnet_power_setting.cli.cmd_verify",
	"compare": "hetnet_power_setting.cli.cmd_compare",
}

# Verification suites
# -------------------
# each checker takes (seed, samples) and returns a VerifyReport

verify_suites = {
	"closedform": "hetnet_power_setting.power_setting.analysis.analysis.verify_closed_form",
	"substitutes": "hetnet_power_setting.power_setting.analysis.analysis.verify_substitutes",
	"ne": "hetnet_power_setting.power_setting.analysis.analysis.verify_ne",
	"welfare": "hetnet_power_setting.power_setting.analysis.analysis.verify_welfare",
	"fixed": "hetnet_power_setting.power_setting.analysis.analysis.verify_fixed",
	"order": "hetnet_power_setting.power_setting.analysis.analysis.verify_order",
}
