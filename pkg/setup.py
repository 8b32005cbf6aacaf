from setuptools import find_packages, setup

setup(
	name="hetnet_power_setting",
	version="0.1.0",
	description="Best-reply downlink power setting game for two-tier networks with carrier aggregation",
	author="hetnet_power_setting contributors",
	packages=find_packages(),
	include_package_data=True,
	package_data={"hetnet_power_setting.config": ["*.json"]},
	install_requires=["numpy>=1.24", "scipy>=1.10", "pandas>=2.0"],
	entry_points={"console_scripts": ["hetnet-power-setting=hetnet_power_setting.cli:main"]},
	zip_safe=False,
)
